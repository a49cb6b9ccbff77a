"""Compiles an effects matrix into runtime trigger/effect bindings."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .core import EffectsMatrix, Stat


class TriggerKind(enum.IntEnum):
    """Runtime trigger conditions, one per matrix row."""

    ON_ENEMY_COLLISION = 0
    ON_ANY_PLAYER_COLLISION = 1
    ON_ALLY_COLLISION = 2
    ON_AREA_TICK = 3


@dataclass(frozen=True)
class EffectInstance:
    """A signed over-time stat modifier produced by one matrix cell."""

    stat: Stat
    sign: int
    magnitude_per_second: float
    duration: float


@dataclass(frozen=True)
class TriggerBinding:
    """One trigger condition plus the effects it applies when fired."""

    trigger: TriggerKind
    effects: tuple[EffectInstance, ...]


@dataclass(frozen=True)
class EffectConfig:
    """Scaling knobs for matrix-driven effects.

    `power_range` is the resolved-power interval used to normalize Power
    into [0, 1] before it scales effect magnitudes.
    """

    base_magnitude: float = 4.0
    duration: float = 3.0
    power_range: tuple[float, float] = (1.0, 40.0)


def normalized_power(resolved_power: float, config: EffectConfig) -> float:
    lo, hi = config.power_range
    if hi <= lo:
        return 0.0
    return min(1.0, max(0.0, (resolved_power - lo) / (hi - lo)))


def bind(
    matrix: EffectsMatrix,
    resolved_power: float,
    config: EffectConfig,
) -> list[TriggerBinding]:
    """Emit one binding per matrix row that has any nonzero cell.

    Each nonzero cell becomes one EffectInstance with the cell's sign and a
    magnitude scaled by resolved Power. Output order is row-major with cells
    left to right, so the result is deterministic.
    """
    magnitude = config.base_magnitude * (1.0 + normalized_power(resolved_power, config))
    bindings: list[TriggerBinding] = []
    for row_index, row in enumerate(matrix.rows):
        effects = tuple(
            EffectInstance(
                stat=Stat(col),
                sign=1 if value > 0 else -1,
                magnitude_per_second=magnitude,
                duration=config.duration,
            )
            for col, value in enumerate(row)
            if value != 0
        )
        if effects:
            bindings.append(TriggerBinding(trigger=TriggerKind(row_index), effects=effects))
    return bindings
