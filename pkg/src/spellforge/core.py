"""Shared domain types: spell types, statuses, the effects matrix, and specs.

Everything here is an immutable value object; construction is cheap and
validation is a separate, total operation (`validate_spec`) that reports
violations as data instead of raising.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field

MATRIX_SIZE = 4
STATUS_NAMES = ("power", "speed", "area", "color")


class Behavior(enum.Enum):
    """Intrinsic runtime behavior attached to a spell type."""

    PROJECTILE = "Projectile"
    FIREBALL = "Fireball"
    THUNDER = "Thunder"
    TRAP = "Trap"
    AREA_EFFECT = "AreaEffect"


class Stat(enum.IntEnum):
    """Entity stats, in matrix column order."""

    HEALTH = 0
    SPEED = 1
    DEFENSE = 2
    MANA = 3


@dataclass(frozen=True)
class SpellType:
    """One registry entry: an index the model emits plus its runtime identity."""

    index: int
    name: str
    base_cost: float
    behavior: Behavior


@dataclass(frozen=True)
class SpellTypeRegistry:
    """Ordered catalog of spell types; indices are contiguous from 0."""

    entries: tuple[SpellType, ...]

    def __post_init__(self) -> None:
        for position, entry in enumerate(self.entries):
            if entry.index != position:
                raise ValueError(
                    f"type indices must be contiguous: entry {position} has index {entry.index}"
                )
        names = [e.name for e in self.entries]
        if len(set(names)) != len(names) or any(not n for n in names):
            raise ValueError("type names must be unique and non-empty")
        for entry in self.entries:
            if not entry.base_cost > 0:
                raise ValueError(f"base cost of {entry.name!r} must be > 0")

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, index: int) -> SpellType:
        return self.entries[index]

    def contains(self, index: int) -> bool:
        return 0 <= index < len(self.entries)

    @staticmethod
    def default() -> "SpellTypeRegistry":
        return SpellTypeRegistry(
            entries=(
                SpellType(0, "Projectile", 10.0, Behavior.PROJECTILE),
                SpellType(1, "Fireball", 15.0, Behavior.FIREBALL),
                SpellType(2, "Thunder", 18.0, Behavior.THUNDER),
                SpellType(3, "Trap", 20.0, Behavior.TRAP),
                SpellType(4, "AreaEffect", 25.0, Behavior.AREA_EFFECT),
            )
        )


@dataclass(frozen=True)
class RangeSequence:
    """Ordered anchor values a raw status interpolates between.

    Scalar sequences hold floats; the color sequence holds RGB triples with
    channels in [0, 255]. Needs at least two anchors.
    """

    name: str
    values: tuple

    def __post_init__(self) -> None:
        if len(self.values) < 2:
            raise ValueError(f"range sequence {self.name!r} needs at least 2 values")
        for v in self.values:
            if isinstance(v, tuple):
                if len(v) != 3 or any(not (0 <= c <= 255) for c in v):
                    raise ValueError(f"bad RGB anchor {v!r} in {self.name!r}")
            elif not math.isfinite(v):
                raise ValueError(f"non-finite anchor in {self.name!r}")

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def bound(self) -> float:
        """Upper end of the raw domain for this status."""
        return float(self.n - 1)


@dataclass(frozen=True)
class StatusVector:
    """Raw model-space status values, each in [0, n-1] of its range sequence."""

    power: float
    speed: float
    area: float
    color: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.power, self.speed, self.area, self.color)


@dataclass(frozen=True)
class EffectsMatrix:
    """4x4 ternary matrix; rows are triggers, columns are stats.

    Rows: 0 enemy collision, 1 any-player collision, 2 ally collision,
    3 general area. Columns: Health, Speed, Defense, Mana. Construction does
    not reject bad cell values so that `validate_spec` can report them.
    """

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.rows) != MATRIX_SIZE or any(len(r) != MATRIX_SIZE for r in self.rows):
            raise ValueError("effects matrix must be 4x4")

    @staticmethod
    def zeros() -> "EffectsMatrix":
        return EffectsMatrix(tuple((0,) * MATRIX_SIZE for _ in range(MATRIX_SIZE)))

    @staticmethod
    def from_rows(rows) -> "EffectsMatrix":
        return EffectsMatrix(tuple(tuple(int(c) for c in row) for row in rows))

    @staticmethod
    def from_cells(cells) -> "EffectsMatrix":
        """Build from 16 row-major cell values."""
        cells = list(cells)
        if len(cells) != MATRIX_SIZE * MATRIX_SIZE:
            raise ValueError(f"expected 16 cells, got {len(cells)}")
        return EffectsMatrix.from_rows(
            [cells[i * MATRIX_SIZE : (i + 1) * MATRIX_SIZE] for i in range(MATRIX_SIZE)]
        )

    def cell(self, row: int, col: int) -> int:
        return self.rows[row][col]

    def nonzero_cells(self) -> list[tuple[int, int, int]]:
        """(row, col, value) for every nonzero cell, row-major order."""
        return [
            (i, j, self.rows[i][j])
            for i in range(MATRIX_SIZE)
            for j in range(MATRIX_SIZE)
            if self.rows[i][j] != 0
        ]

    def problems(self) -> list[str]:
        return [
            f"non-ternary effect cell ({i},{j}) = {self.rows[i][j]}"
            for i in range(MATRIX_SIZE)
            for j in range(MATRIX_SIZE)
            if self.rows[i][j] not in (-1, 0, 1)
        ]

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


@dataclass(frozen=True)
class ResolvedStatuses:
    """Gameplay-unit statuses after range interpolation."""

    power: float
    speed: float
    area: float
    color: tuple[int, int, int]


@dataclass(frozen=True)
class SpellSpec:
    """A fully resolved spell, ready to bind and cast."""

    type_index: int
    statuses: ResolvedStatuses
    effects: EffectsMatrix
    cost: float
    prompt: str = ""
    model_id: str = ""


@dataclass(frozen=True)
class RawPrediction:
    """Model output before decoding into a SpellSpec.

    `status_raws` are clamped into their bounds on construction; probability
    and cell invariants are checked by `validate_raw_prediction` so that
    external backends can be vetted without exceptions.
    """

    type_probs: tuple[float, ...]
    status_raws: tuple[float, float, float, float]
    effect_cells: tuple[int, ...]
    bounds: tuple[float, float, float, float] = field(default=(1.0, 1.0, 1.0, 1.0))

    def __post_init__(self) -> None:
        clamped = tuple(
            min(max(float(v), 0.0), b) if math.isfinite(v) else 0.0
            for v, b in zip(self.status_raws, self.bounds)
        )
        object.__setattr__(self, "status_raws", clamped)
        object.__setattr__(self, "type_probs", tuple(float(p) for p in self.type_probs))
        object.__setattr__(self, "effect_cells", tuple(int(c) for c in self.effect_cells))

    def argmax_type(self) -> int:
        return max(range(len(self.type_probs)), key=lambda i: (self.type_probs[i], -i))

    def matrix(self) -> EffectsMatrix:
        return EffectsMatrix.from_cells(self.effect_cells)


def validate_raw_prediction(pred: RawPrediction, n_types: int) -> list[str]:
    """Contract shared by the builtin model and external backends."""
    violations: list[str] = []
    if len(pred.type_probs) != n_types:
        violations.append(f"type_probs has {len(pred.type_probs)} entries, expected {n_types}")
    else:
        if any(p < 0 or not math.isfinite(p) for p in pred.type_probs):
            violations.append("type_probs must be non-negative and finite")
        elif abs(sum(pred.type_probs) - 1.0) > 1e-6:
            violations.append(f"type_probs sum to {sum(pred.type_probs)!r}, expected 1")
    if len(pred.status_raws) != 4:
        violations.append(f"status_raws has {len(pred.status_raws)} entries, expected 4")
    if len(pred.effect_cells) != 16:
        violations.append(f"effect_cells has {len(pred.effect_cells)} entries, expected 16")
    else:
        for k, c in enumerate(pred.effect_cells):
            if c not in (-1, 0, 1):
                violations.append(f"non-ternary effect cell at position {k}: {c}")
    return violations


def validate_spec(
    spec: SpellSpec,
    registry: SpellTypeRegistry,
    ranges: dict[str, RangeSequence] | None = None,
) -> list[str]:
    """Report every invariant violation in `spec`; empty list means ok.

    Total: never raises on arbitrary finite input. Status range checks run
    only when the forging `ranges` are supplied.
    """
    violations: list[str] = []
    if not registry.contains(spec.type_index):
        violations.append(f"unknown type index {spec.type_index}")
    violations.extend(spec.effects.problems())
    if not (math.isfinite(spec.cost) and spec.cost >= 1.0):
        violations.append(f"cost {spec.cost} below floor 1")
    for name, value in (
        ("power", spec.statuses.power),
        ("speed", spec.statuses.speed),
        ("area", spec.statuses.area),
    ):
        if not math.isfinite(value):
            violations.append(f"non-finite status {name}")
        elif ranges and name in ranges:
            seq = ranges[name]
            lo, hi = min(seq.values), max(seq.values)
            if not (lo <= value <= hi):
                violations.append(f"status {name} = {value} outside [{lo}, {hi}]")
    color = spec.statuses.color
    if len(color) != 3 or any(not (0 <= c <= 255) for c in color):
        violations.append(f"bad color {color!r}")
    return violations


def spec_to_dict(spec: SpellSpec) -> dict:
    """JSON-ready dict with the documented key order."""
    return {
        "type": spec.type_index,
        "statuses": {
            "power": spec.statuses.power,
            "speed": spec.statuses.speed,
            "area": spec.statuses.area,
            "color": list(spec.statuses.color),
        },
        "effects": spec.effects.to_lists(),
        "cost": spec.cost,
        "prompt": spec.prompt,
        "model_id": spec.model_id,
    }


def spec_to_json(spec: SpellSpec) -> str:
    return json.dumps(spec_to_dict(spec))


def spec_from_dict(data: dict) -> SpellSpec:
    try:
        statuses = data["statuses"]
        color = statuses["color"]
        return SpellSpec(
            type_index=int(data["type"]),
            statuses=ResolvedStatuses(
                power=float(statuses["power"]),
                speed=float(statuses["speed"]),
                area=float(statuses["area"]),
                color=(int(color[0]), int(color[1]), int(color[2])),
            ),
            effects=EffectsMatrix.from_rows(data["effects"]),
            cost=float(data["cost"]),
            prompt=str(data.get("prompt", "")),
            model_id=str(data.get("model_id", "")),
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise ValueError(f"malformed spell spec: {exc}") from exc


def spec_from_json(text: str) -> SpellSpec:
    return spec_from_dict(json.loads(text))
