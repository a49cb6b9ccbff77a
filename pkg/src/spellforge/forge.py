"""End-to-end pipeline: prompt -> prediction -> resolved, priced, bound spell."""

from __future__ import annotations

import time
from dataclasses import dataclass

from .binding import EffectConfig, TriggerBinding, bind
from .core import (
    RangeSequence,
    ResolvedStatuses,
    SpellSpec,
    SpellTypeRegistry,
    StatusVector,
    spec_to_dict,
    validate_raw_prediction,
    validate_spec,
)
from .paramize import CostConfig, compute_cost, cost_components, resolve_color, resolve_status
from .sim import STAT_NAMES, TRIGGER_NAMES
from .textmodel.backend import BackendHandle


class ForgeValidationError(Exception):
    """The backend's decoded prediction violates engine invariants."""


@dataclass(frozen=True)
class ForgedSpell:
    spec: SpellSpec
    bindings: tuple[TriggerBinding, ...]
    predict_ms: float
    total_ms: float
    model_id: str
    # (base, statuses, effects) mana contributions, itemized for the UI
    cost_breakdown: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def to_dict(self) -> dict:
        return {
            "spec": spec_to_dict(self.spec),
            "cost_breakdown": {
                "base": self.cost_breakdown[0],
                "statuses": self.cost_breakdown[1],
                "effects": self.cost_breakdown[2],
            },
            "bindings": [
                {
                    "trigger": TRIGGER_NAMES[b.trigger],
                    "effects": [
                        {
                            "stat": STAT_NAMES[e.stat],
                            "sign": e.sign,
                            "magnitude_per_second": e.magnitude_per_second,
                            "duration": e.duration,
                        }
                        for e in b.effects
                    ],
                }
                for b in self.bindings
            ],
            "timing": {"predict_ms": self.predict_ms, "total_ms": self.total_ms},
            "model_id": self.model_id,
        }


def forge(
    prompt: str,
    backend: BackendHandle,
    registry: SpellTypeRegistry,
    ranges: dict[str, RangeSequence],
    cost_config: CostConfig,
    effect_config: EffectConfig,
) -> ForgedSpell:
    """Compile a prompt into a castable spell, recording wall-clock timing.

    Deterministic for a fixed backend, up to the timing fields.
    """
    if not prompt or not prompt.strip():
        raise ValueError("prompt is empty")
    started = time.perf_counter()
    prediction = backend.predict(prompt)
    predict_ms = (time.perf_counter() - started) * 1000.0

    violations = validate_raw_prediction(prediction, len(registry))
    if violations:
        raise ForgeValidationError("; ".join(violations))
    type_index = prediction.argmax_type()
    raw = StatusVector(*prediction.status_raws)
    statuses = ResolvedStatuses(
        power=resolve_status(raw.power, ranges["power"]),
        speed=resolve_status(raw.speed, ranges["speed"]),
        area=resolve_status(raw.area, ranges["area"]),
        color=resolve_color(raw.color, ranges["color"]),
    )
    matrix = prediction.matrix()
    breakdown = cost_components(type_index, raw, matrix, cost_config)
    cost = compute_cost(type_index, raw, matrix, cost_config)
    spec = SpellSpec(
        type_index=type_index,
        statuses=statuses,
        effects=matrix,
        cost=cost,
        prompt=prompt,
        model_id=backend.model_id,
    )
    spec_violations = validate_spec(spec, registry, ranges)
    if spec_violations:
        raise ForgeValidationError("; ".join(spec_violations))
    bindings = tuple(bind(matrix, statuses.power, effect_config))
    total_ms = (time.perf_counter() - started) * 1000.0
    return ForgedSpell(
        spec=spec,
        bindings=bindings,
        predict_ms=predict_ms,
        total_ms=total_ms,
        model_id=backend.model_id,
        cost_breakdown=breakdown,
    )
