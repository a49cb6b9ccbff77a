"""Status resolution (piecewise-linear interpolation) and mana pricing."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .core import EffectsMatrix, RangeSequence, StatusVector

# Default per-(row, sign) mana weights for nonzero matrix cells. Positive
# entries make a spell pricier, negative entries discount it: harming
# enemies (row 0) costs mana, harming any-player/allies (rows 1-2) is a
# liability and refunds some, area cells (row 3) hit everyone and lean
# costly. Sign key is the cell value, not the weight's sign.
DEFAULT_CELL_WEIGHTS: dict[tuple[int, int], float] = {
    (0, -1): 5.0,
    (0, 1): -2.0,
    (1, 1): 4.0,
    (1, -1): -3.0,
    (2, 1): 4.0,
    (2, -1): -3.0,
    (3, -1): 3.0,
    (3, 1): 1.0,
}

DEFAULT_STATUS_WEIGHTS = {"power": 0.5, "speed": 0.3, "area": 0.4, "color": 0.0}


@dataclass(frozen=True)
class CostConfig:
    """Pricing table: per-type base costs plus status and effect weights.

    `status_bounds` are the raw-domain upper ends (n-1 of each range
    sequence) used to normalize statuses to [0, 1] so weights stay
    range-independent. `cell_overrides` refines specific (row, col, sign)
    cells; otherwise the (row, sign) table applies.
    """

    base_costs: tuple[float, ...]
    status_weights: dict[str, float] = field(
        default_factory=lambda: dict(DEFAULT_STATUS_WEIGHTS)
    )
    cell_weights: dict[tuple[int, int], float] = field(
        default_factory=lambda: dict(DEFAULT_CELL_WEIGHTS)
    )
    cell_overrides: dict[tuple[int, int, int], float] = field(default_factory=dict)
    status_bounds: tuple[float, float, float, float] = (4.0, 4.0, 4.0, 4.0)
    floor: float = 1.0

    def __post_init__(self) -> None:
        if any(not b > 0 for b in self.base_costs):
            raise ValueError("base costs must be > 0")
        if self.floor < 0:
            raise ValueError("cost floor must be >= 0")

    def cell_weight(self, row: int, col: int, sign: int) -> float:
        override = self.cell_overrides.get((row, col, sign))
        if override is not None:
            return override
        return self.cell_weights.get((row, sign), 0.0)


def resolve_status(raw: float, ranges: RangeSequence) -> float:
    """Map a raw model value onto the range sequence.

    With i = floor(raw) and j = frac(raw), returns v_i + (v_{i+1} - v_i) * j.
    Raw values are clamped into [0, n-1]; the right endpoint returns the last
    anchor exactly.
    """
    if not math.isfinite(raw):
        raise ValueError(f"raw status value must be finite, got {raw!r}")
    if ranges.n < 2:
        raise ValueError(f"range sequence {ranges.name!r} needs at least 2 values")
    clamped = min(max(raw, 0.0), ranges.bound)
    if clamped >= ranges.bound:
        return float(ranges.values[-1])
    i = int(math.floor(clamped))
    j = clamped - i
    v_i, v_next = ranges.values[i], ranges.values[i + 1]
    return float(v_i + (v_next - v_i) * j)


def resolve_color(raw: float, palette: RangeSequence) -> tuple[int, int, int]:
    """Interpolate each RGB channel independently, rounding half up."""
    if not math.isfinite(raw):
        raise ValueError(f"raw color value must be finite, got {raw!r}")
    if palette.n < 2:
        raise ValueError(f"palette {palette.name!r} needs at least 2 values")
    clamped = min(max(raw, 0.0), palette.bound)
    if clamped >= palette.bound:
        anchor = palette.values[-1]
        return (int(anchor[0]), int(anchor[1]), int(anchor[2]))
    i = int(math.floor(clamped))
    j = clamped - i
    lo, hi = palette.values[i], palette.values[i + 1]
    channels = tuple(
        int(min(255, max(0, math.floor(lo[c] + (hi[c] - lo[c]) * j + 0.5))))
        for c in range(3)
    )
    return channels  # type: ignore[return-value]


def cost_components(
    type_index: int,
    statuses: StatusVector,
    effects: EffectsMatrix,
    config: CostConfig,
) -> tuple[float, float, float]:
    """(base, status contribution, effect contribution) before the floor."""
    if not (0 <= type_index < len(config.base_costs)):
        raise ValueError(f"unknown type index {type_index}")
    status_part = 0.0
    for name, raw, bound in zip(
        ("power", "speed", "area", "color"), statuses.as_tuple(), config.status_bounds
    ):
        normalized = min(max(raw, 0.0), bound) / bound if bound > 0 else 0.0
        status_part += config.status_weights.get(name, 0.0) * normalized
    effect_part = sum(
        config.cell_weight(row, col, value) for row, col, value in effects.nonzero_cells()
    )
    return config.base_costs[type_index], status_part, effect_part


def compute_cost(
    type_index: int,
    statuses: StatusVector,
    effects: EffectsMatrix,
    config: CostConfig,
) -> float:
    """Price a spell: base(type) + weighted normalized statuses + cell weights.

    Pure and deterministic; the result never drops below the config floor.
    """
    return max(config.floor, sum(cost_components(type_index, statuses, effects, config)))
