"""Engine configuration: one JSON file wires registry, ranges, and pricing.

Schema is documented in docs/config.md; the shipped default lives at
config/default.json and matches `default_config()` exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .binding import EffectConfig
from .core import Behavior, RangeSequence, SpellType, SpellTypeRegistry
from .paramize import DEFAULT_CELL_WEIGHTS, DEFAULT_STATUS_WEIGHTS, CostConfig

CONFIG_VERSION = 1

DEFAULT_RANGES: dict[str, tuple] = {
    "power": (1.0, 5.0, 10.0, 20.0, 40.0),
    "speed": (1.0, 3.0, 5.0, 8.0, 12.0),
    "area": (0.5, 1.0, 2.0, 3.5, 5.0),
    "color": ((230, 57, 70), (244, 162, 41), (252, 226, 94), (82, 183, 136), (69, 123, 245)),
}


@dataclass(frozen=True)
class EngineConfig:
    registry: SpellTypeRegistry
    ranges: dict[str, RangeSequence]
    cost: CostConfig
    effect: EffectConfig

    def bounds(self) -> tuple[float, float, float, float]:
        """Raw-domain upper ends (n-1) in power/speed/area/color order."""
        return tuple(self.ranges[name].bound for name in ("power", "speed", "area", "color"))  # type: ignore[return-value]


def _build(registry: SpellTypeRegistry, ranges: dict[str, RangeSequence],
           status_weights: dict[str, float], cell_weights: dict[tuple[int, int], float],
           cell_overrides: dict[tuple[int, int, int], float], floor: float,
           base_magnitude: float, duration: float) -> EngineConfig:
    for name in ("power", "speed", "area", "color"):
        if name not in ranges:
            raise ValueError(f"missing range sequence for status {name!r}")
    power_values = ranges["power"].values
    cost = CostConfig(
        base_costs=tuple(entry.base_cost for entry in registry.entries),
        status_weights=status_weights,
        cell_weights=cell_weights,
        cell_overrides=cell_overrides,
        status_bounds=tuple(ranges[n].bound for n in ("power", "speed", "area", "color")),  # type: ignore[arg-type]
        floor=floor,
    )
    effect = EffectConfig(
        base_magnitude=base_magnitude,
        duration=duration,
        power_range=(float(min(power_values)), float(max(power_values))),
    )
    return EngineConfig(registry=registry, ranges=ranges, cost=cost, effect=effect)


def default_config() -> EngineConfig:
    ranges = {
        name: RangeSequence(name=name, values=values)
        for name, values in DEFAULT_RANGES.items()
    }
    return _build(
        registry=SpellTypeRegistry.default(),
        ranges=ranges,
        status_weights=dict(DEFAULT_STATUS_WEIGHTS),
        cell_weights=dict(DEFAULT_CELL_WEIGHTS),
        cell_overrides={},
        floor=1.0,
        base_magnitude=4.0,
        duration=3.0,
    )


def config_to_dict(config: EngineConfig) -> dict:
    return {
        "version": CONFIG_VERSION,
        "types": [
            {
                "index": e.index,
                "name": e.name,
                "base_cost": e.base_cost,
                "behavior": e.behavior.value,
            }
            for e in config.registry.entries
        ],
        "ranges": {
            name: [list(v) if isinstance(v, tuple) else v for v in seq.values]
            for name, seq in config.ranges.items()
        },
        "cost": {
            "status_weights": dict(config.cost.status_weights),
            "cell_weights": [
                {"row": row, "sign": sign, "weight": w}
                for (row, sign), w in sorted(config.cost.cell_weights.items())
            ],
            "cell_overrides": [
                {"row": row, "col": col, "sign": sign, "weight": w}
                for (row, col, sign), w in sorted(config.cost.cell_overrides.items())
            ],
            "floor": config.cost.floor,
        },
        "effect": {
            "base_magnitude": config.effect.base_magnitude,
            "duration": config.effect.duration,
        },
    }


def config_from_dict(data: dict) -> EngineConfig:
    version = data.get("version")
    if version != CONFIG_VERSION:
        raise ValueError(f"unsupported config version {version!r}")
    try:
        entries = tuple(
            SpellType(
                index=int(t["index"]),
                name=str(t["name"]),
                base_cost=float(t["base_cost"]),
                behavior=Behavior(t["behavior"]),
            )
            for t in data["types"]
        )
        registry = SpellTypeRegistry(entries=entries)
        ranges = {}
        for name, values in data["ranges"].items():
            anchors = tuple(
                tuple(int(c) for c in v) if isinstance(v, list) else float(v) for v in values
            )
            ranges[name] = RangeSequence(name=name, values=anchors)
        cost = data["cost"]
        cell_weights = {
            (int(c["row"]), int(c["sign"])): float(c["weight"]) for c in cost["cell_weights"]
        }
        cell_overrides = {
            (int(c["row"]), int(c["col"]), int(c["sign"])): float(c["weight"])
            for c in cost.get("cell_overrides", [])
        }
        effect = data["effect"]
        return _build(
            registry=registry,
            ranges=ranges,
            status_weights={k: float(v) for k, v in cost["status_weights"].items()},
            cell_weights=cell_weights,
            cell_overrides=cell_overrides,
            floor=float(cost.get("floor", 1.0)),
            base_magnitude=float(effect["base_magnitude"]),
            duration=float(effect["duration"]),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed engine config: {exc}") from exc


def load_config(path: str | Path) -> EngineConfig:
    text = Path(path).read_text(encoding="utf-8")
    return config_from_dict(json.loads(text))


def save_config(config: EngineConfig, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(config_to_dict(config), indent=2) + "\n", encoding="utf-8"
    )
