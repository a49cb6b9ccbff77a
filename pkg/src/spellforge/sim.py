"""Deterministic fixed-timestep 2D arena for casting and dueling spells.

One arena instance is strictly single-threaded. Every tick advances the
world in a fixed order (movement, regen, modifiers, spells, defeat), always
iterating entities and spells in id order, so a given initial state, action
script, and seed replay to an identical event trace.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field

from .binding import EffectConfig, TriggerBinding, TriggerKind, bind
from .core import Behavior, SpellSpec, SpellTypeRegistry, Stat, validate_spec

TRIGGER_NAMES = {
    TriggerKind.ON_ENEMY_COLLISION: "OnEnemyCollision",
    TriggerKind.ON_ANY_PLAYER_COLLISION: "OnAnyPlayerCollision",
    TriggerKind.ON_ALLY_COLLISION: "OnAllyCollision",
    TriggerKind.ON_AREA_TICK: "OnAreaTick",
}

STAT_NAMES = {
    Stat.HEALTH: "Health",
    Stat.SPEED: "Speed",
    Stat.DEFENSE: "Defense",
    Stat.MANA: "Mana",
}


@dataclass(frozen=True)
class ArenaConfig:
    """Engine defaults for combat; every number here is a tuning knob."""

    tick_seconds: float = 0.05
    half_extent: float = 20.0
    base_health: float = 100.0
    base_speed: float = 5.0
    base_defense: float = 0.0
    base_mana: float = 100.0
    mana_regen_per_second: float = 2.0
    entity_radius: float = 0.5
    projectile_max_range: float = 25.0
    fireball_burst_bonus: float = 1.5
    thunder_delay_seconds: float = 0.6
    trap_arm_delay_seconds: float = 0.5
    area_duration_seconds: float = 5.0
    area_tick_interval_seconds: float = 0.5
    movement_jitter: bool = False


@dataclass
class Modifier:
    stat: Stat
    rate_per_second: float
    remaining: float
    source_spell: int
    trigger_row: int


@dataclass
class Entity:
    id: int
    team: int
    x: float
    y: float
    health: float
    speed: float
    defense: float
    mana: float
    alive: bool = True
    modifiers: list[Modifier] = field(default_factory=list)
    move_intent: tuple[float, float] = (0.0, 0.0)


@dataclass
class SpellObject:
    id: int
    owner: int
    behavior: Behavior
    type_index: int
    x: float
    y: float
    vx: float
    vy: float
    aim: tuple[float, float]
    power: float
    speed: float
    area: float
    bindings: dict[int, TriggerBinding]
    phase: str = "flying"
    traveled: float = 0.0
    timer: float = 0.0
    age: float = 0.0


@dataclass(frozen=True)
class SimEvent:
    tick: int
    kind: str
    payload: dict

    def to_dict(self) -> dict:
        return {"tick": self.tick, "kind": self.kind, **self.payload}


def trace_to_jsonl(events: list[SimEvent]) -> str:
    """One event per line; the byte-stable replay surface (docs/trace.md)."""
    return "".join(json.dumps(event.to_dict()) + "\n" for event in events)


class Arena:
    def __init__(
        self,
        config: ArenaConfig | None = None,
        registry: SpellTypeRegistry | None = None,
        seed: int = 0,
    ):
        self.config = config or ArenaConfig()
        self.registry = registry or SpellTypeRegistry.default()
        self.rng = random.Random(seed)
        self.entities: dict[int, Entity] = {}
        self.spells: dict[int, SpellObject] = {}
        self.tick_count = 0
        self.trace: list[SimEvent] = []
        self._next_entity_id = 0
        self._next_spell_id = 0

    # -- setup ----------------------------------------------------------

    def add_entity(self, team: int, position: tuple[float, float]) -> Entity:
        entity = Entity(
            id=self._next_entity_id,
            team=team,
            x=float(position[0]),
            y=float(position[1]),
            health=self.config.base_health,
            speed=self.config.base_speed,
            defense=self.config.base_defense,
            mana=self.config.base_mana,
        )
        self.entities[entity.id] = entity
        self._next_entity_id += 1
        return entity

    def set_movement(self, entity_id: int, direction: tuple[float, float]) -> None:
        """Store a movement intent, applied at the start of the next tick."""
        entity = self.entities[entity_id]
        dx, dy = float(direction[0]), float(direction[1])
        norm = math.hypot(dx, dy)
        entity.move_intent = (dx / norm, dy / norm) if norm > 0 else (0.0, 0.0)

    # -- casting ---------------------------------------------------------

    def cast(
        self,
        caster_id: int,
        spec: SpellSpec,
        bindings: list[TriggerBinding],
        aim: tuple[float, float],
    ) -> SimEvent:
        """Spend mana and spawn the spell object, or reject without change."""
        caster = self.entities.get(caster_id)
        if caster is None:
            raise ValueError(f"unknown caster id {caster_id}")
        if not caster.alive:
            raise ValueError(f"caster {caster_id} is dead")
        if caster.mana < spec.cost:
            event = SimEvent(
                self.tick_count,
                "CastRejected",
                {"caster": caster_id, "cost": spec.cost, "mana": caster.mana},
            )
            self.trace.append(event)
            return event
        caster.mana -= spec.cost
        behavior = self.registry[spec.type_index].behavior
        aim_point = (float(aim[0]), float(aim[1]))
        if behavior in (Behavior.PROJECTILE, Behavior.FIREBALL):
            x, y = caster.x, caster.y
            dx, dy = aim_point[0] - x, aim_point[1] - y
            norm = math.hypot(dx, dy)
            direction = (dx / norm, dy / norm) if norm > 0 else (1.0, 0.0)
            vx, vy = direction[0] * spec.statuses.speed, direction[1] * spec.statuses.speed
            phase = "flying"
        else:
            limit = self.config.half_extent
            x = min(max(aim_point[0], -limit), limit)
            y = min(max(aim_point[1], -limit), limit)
            vx = vy = 0.0
            phase = {
                Behavior.THUNDER: "armed",
                Behavior.TRAP: "flying",
                Behavior.AREA_EFFECT: "zone-active",
            }[behavior]
        spell = SpellObject(
            id=self._next_spell_id,
            owner=caster_id,
            behavior=behavior,
            type_index=spec.type_index,
            x=x,
            y=y,
            vx=vx,
            vy=vy,
            aim=aim_point,
            power=spec.statuses.power,
            speed=spec.statuses.speed,
            area=spec.statuses.area,
            bindings={int(b.trigger): b for b in bindings},
            phase=phase,
        )
        self.spells[spell.id] = spell
        self._next_spell_id += 1
        event = SimEvent(
            self.tick_count,
            "Cast",
            {
                "caster": caster_id,
                "spell": spell.id,
                "spell_type": spec.type_index,
                "cost": spec.cost,
                "aim": [aim_point[0], aim_point[1]],
            },
        )
        self.trace.append(event)
        return event

    # -- tick ------------------------------------------------------------

    def tick(self) -> list[SimEvent]:
        """Advance one fixed timestep; returns the events it produced."""
        events: list[SimEvent] = []
        dt = self.config.tick_seconds
        alive = [self.entities[i] for i in sorted(self.entities) if self.entities[i].alive]

        # 0. movement intents
        limit = self.config.half_extent
        for entity in alive:
            ix, iy = entity.move_intent
            if ix or iy:
                entity.x = min(max(entity.x + ix * entity.speed * dt, -limit), limit)
                entity.y = min(max(entity.y + iy * entity.speed * dt, -limit), limit)

        # 1. mana regeneration
        for entity in alive:
            entity.mana = min(
                self.config.base_mana,
                entity.mana + self.config.mana_regen_per_second * dt,
            )

        # 2. active modifiers; Defense reduces aggregate Health damage
        for entity in alive:
            damage_rate = sum(
                -m.rate_per_second
                for m in entity.modifiers
                if m.stat == Stat.HEALTH and m.rate_per_second < 0
            )
            heal_rate = sum(
                m.rate_per_second
                for m in entity.modifiers
                if m.stat == Stat.HEALTH and m.rate_per_second > 0
            )
            effective = max(0.0, damage_rate - entity.defense)
            entity.health = min(
                self.config.base_health, max(0.0, entity.health + (heal_rate - effective) * dt)
            )
            for stat_name, cap in (("speed", None), ("defense", None), ("mana", self.config.base_mana)):
                stat = Stat[stat_name.upper()]
                delta = sum(
                    m.rate_per_second for m in entity.modifiers if m.stat == stat
                )
                if delta:
                    value = getattr(entity, stat_name) + delta * dt
                    value = max(0.0, value)
                    if cap is not None:
                        value = min(cap, value)
                    setattr(entity, stat_name, value)

        # 3. expire modifiers
        for entity in alive:
            for modifier in entity.modifiers:
                modifier.remaining -= dt
            entity.modifiers = [m for m in entity.modifiers if m.remaining > 1e-9]

        # 4/5. spell state machines and their triggers
        done: list[int] = []
        for spell_id in sorted(self.spells):
            spell = self.spells[spell_id]
            self._advance_spell(spell, dt, events)
            if spell.phase == "done":
                done.append(spell_id)
        for spell_id in done:
            del self.spells[spell_id]

        # 6. defeat check
        for entity_id in sorted(self.entities):
            entity = self.entities[entity_id]
            if entity.alive and entity.health <= 0.0:
                entity.alive = False
                entity.health = 0.0
                events.append(SimEvent(self.tick_count, "EntityDefeated", {"entity": entity_id}))

        self.trace.extend(events)
        self.tick_count += 1
        return events

    # -- spell behaviors ---------------------------------------------------

    def _alive_in_order(self):
        return [self.entities[i] for i in sorted(self.entities) if self.entities[i].alive]

    def _contact_rows(self, spell: SpellObject, target: Entity) -> tuple[int, ...]:
        owner = self.entities[spell.owner]
        if target.team != owner.team:
            return (int(TriggerKind.ON_ENEMY_COLLISION), int(TriggerKind.ON_ANY_PLAYER_COLLISION))
        return (int(TriggerKind.ON_ALLY_COLLISION), int(TriggerKind.ON_ANY_PLAYER_COLLISION))

    def _fire_rows(
        self, spell: SpellObject, rows: tuple[int, ...], target: Entity, events: list[SimEvent]
    ) -> None:
        for row in rows:
            binding = spell.bindings.get(row)
            if binding is None:
                continue
            events.append(
                SimEvent(
                    self.tick_count,
                    "TriggerFired",
                    {
                        "spell": spell.id,
                        "trigger": TRIGGER_NAMES[TriggerKind(row)],
                        "target": target.id,
                    },
                )
            )
            for effect in binding.effects:
                rate = effect.sign * effect.magnitude_per_second
                existing = next(
                    (
                        m
                        for m in target.modifiers
                        if m.source_spell == spell.id
                        and m.trigger_row == row
                        and m.stat == effect.stat
                    ),
                    None,
                )
                if existing is not None:
                    existing.rate_per_second = rate
                    existing.remaining = effect.duration
                else:
                    target.modifiers.append(
                        Modifier(
                            stat=effect.stat,
                            rate_per_second=rate,
                            remaining=effect.duration,
                            source_spell=spell.id,
                            trigger_row=row,
                        )
                    )
                events.append(
                    SimEvent(
                        self.tick_count,
                        "EffectApplied",
                        {
                            "spell": spell.id,
                            "target": target.id,
                            "trigger": TRIGGER_NAMES[TriggerKind(row)],
                            "stat": STAT_NAMES[effect.stat],
                            "sign": effect.sign,
                            "rate": effect.magnitude_per_second,
                            "duration": effect.duration,
                        },
                    )
                )

    def _expire(self, spell: SpellObject, reason: str, events: list[SimEvent]) -> None:
        spell.phase = "done"
        events.append(
            SimEvent(self.tick_count, "SpellExpired", {"spell": spell.id, "reason": reason})
        )

    def _overlaps(self, spell: SpellObject, entity: Entity, extra: float = 0.0) -> bool:
        reach = spell.area + extra + self.config.entity_radius
        return math.hypot(entity.x - spell.x, entity.y - spell.y) <= reach

    def _advance_spell(self, spell: SpellObject, dt: float, events: list[SimEvent]) -> None:
        behavior = spell.behavior
        if behavior in (Behavior.PROJECTILE, Behavior.FIREBALL):
            step_x, step_y = spell.vx * dt, spell.vy * dt
            spell.x += step_x
            spell.y += step_y
            spell.traveled += math.hypot(step_x, step_y)
            hit = next(
                (
                    e
                    for e in self._alive_in_order()
                    if e.id != spell.owner and self._overlaps(spell, e)
                ),
                None,
            )
            if hit is not None:
                if behavior == Behavior.FIREBALL:
                    # burst covers every entity near the impact, owner included
                    for target in self._alive_in_order():
                        if self._overlaps(spell, target, extra=self.config.fireball_burst_bonus):
                            self._fire_rows(spell, self._contact_rows(spell, target), target, events)
                else:
                    self._fire_rows(spell, self._contact_rows(spell, hit), hit, events)
                self._expire(spell, "impact", events)
            elif (
                spell.traveled >= self.config.projectile_max_range
                or abs(spell.x) > self.config.half_extent
                or abs(spell.y) > self.config.half_extent
            ):
                self._expire(spell, "out_of_range", events)
        elif behavior == Behavior.THUNDER:
            spell.timer += dt
            if spell.timer >= self.config.thunder_delay_seconds:
                for target in self._alive_in_order():
                    if self._overlaps(spell, target):
                        self._fire_rows(spell, self._contact_rows(spell, target), target, events)
                self._expire(spell, "impact", events)
        elif behavior == Behavior.TRAP:
            spell.timer += dt
            if spell.phase == "flying" and spell.timer >= self.config.trap_arm_delay_seconds:
                spell.phase = "armed"
            if spell.phase == "armed":
                for target in self._alive_in_order():
                    if not self._overlaps(spell, target):
                        continue
                    rows = self._contact_rows(spell, target)
                    if any(row in spell.bindings for row in rows):
                        self._fire_rows(spell, rows, target, events)
                        self._expire(spell, "impact", events)
                        break
        elif behavior == Behavior.AREA_EFFECT:
            spell.age += dt
            spell.timer += dt
            interval = self.config.area_tick_interval_seconds
            row = int(TriggerKind.ON_AREA_TICK)
            while spell.timer >= interval:
                spell.timer -= interval
                if row in spell.bindings:
                    for target in self._alive_in_order():
                        if self._overlaps(spell, target):
                            self._fire_rows(spell, (row,), target, events)
            if spell.age >= self.config.area_duration_seconds:
                self._expire(spell, "depleted", events)


# ---------------------------------------------------------------------------
# duels


@dataclass(frozen=True)
class DuelResult:
    winner: int | None
    ticks: int
    final_stats: dict[int, dict[str, float]]
    trace: tuple[SimEvent, ...]
    frames: tuple[dict, ...]

    def to_dict(self) -> dict:
        return {
            "winner": self.winner,
            "ticks": self.ticks,
            "final_stats": {str(k): v for k, v in self.final_stats.items()},
            "trace": [e.to_dict() for e in self.trace],
            "frames": list(self.frames),
        }


def _entity_snapshot(entity: Entity) -> dict:
    return {
        "id": entity.id,
        "pos": [entity.x, entity.y],
        "health": entity.health,
        "speed": entity.speed,
        "defense": entity.defense,
        "mana": entity.mana,
        "alive": entity.alive,
    }


def _frame(arena: Arena, tick: int) -> dict:
    return {
        "tick": tick,
        "entities": [_entity_snapshot(arena.entities[i]) for i in sorted(arena.entities)],
        "spells": [
            {
                "id": s.id,
                "type": s.type_index,
                "pos": [s.x, s.y],
                "phase": s.phase,
                "area": s.area,
            }
            for s in (arena.spells[i] for i in sorted(arena.spells))
        ],
    }


class ChasePolicy:
    """Walk toward the opponent and cast whenever mana allows."""

    def __init__(self, spec: SpellSpec, bindings: list[TriggerBinding]):
        self.spec = spec
        self.bindings = bindings

    def act(self, arena: Arena, me: int, opponent: int) -> None:
        self_entity = arena.entities[me]
        other = arena.entities[opponent]
        if not self_entity.alive or not other.alive:
            return
        arena.set_movement(me, (other.x - self_entity.x, other.y - self_entity.y))
        if self_entity.mana >= self.spec.cost:
            arena.cast(me, self.spec, self.bindings, (other.x, other.y))


class ScriptedPolicy:
    """Replays {"tick": t, "move": [dx,dy]} / {"tick": t, "cast": [x,y]} actions.

    Movement intents persist until overridden; casts execute on their tick
    even when mana is short (the rejection lands in the trace).
    """

    def __init__(self, spec: SpellSpec, bindings: list[TriggerBinding], script: list[dict]):
        self.spec = spec
        self.bindings = bindings
        self.by_tick: dict[int, list[dict]] = {}
        for action in script:
            self.by_tick.setdefault(int(action["tick"]), []).append(action)

    def act(self, arena: Arena, me: int, opponent: int) -> None:
        if not arena.entities[me].alive:
            return
        for action in self.by_tick.get(arena.tick_count, []):
            if "move" in action:
                arena.set_movement(me, tuple(action["move"]))
            if "cast" in action:
                aim = action["cast"]
                arena.cast(me, self.spec, self.bindings, (float(aim[0]), float(aim[1])))


def run_duel(
    spell_a: SpellSpec,
    spell_b: SpellSpec,
    seed: int,
    max_ticks: int = 2400,
    policy: str | tuple[list[dict], list[dict]] = "chase",
    registry: SpellTypeRegistry | None = None,
    effect_config: EffectConfig | None = None,
    arena_config: ArenaConfig | None = None,
) -> DuelResult:
    """Pit two spells against each other; deterministic for fixed inputs."""
    if max_ticks <= 0:
        raise ValueError("max_ticks must be positive")
    registry = registry or SpellTypeRegistry.default()
    for label, spec in (("spell_a", spell_a), ("spell_b", spell_b)):
        violations = validate_spec(spec, registry)
        if violations:
            raise ValueError(f"{label} is invalid: {'; '.join(violations)}")
    effect_config = effect_config or EffectConfig()
    arena = Arena(config=arena_config, registry=registry, seed=seed)
    first = arena.add_entity(team=0, position=(-5.0, 0.0))
    second = arena.add_entity(team=1, position=(5.0, 0.0))
    bindings_a = bind(spell_a.effects, spell_a.statuses.power, effect_config)
    bindings_b = bind(spell_b.effects, spell_b.statuses.power, effect_config)
    if policy == "chase":
        policies = {
            first.id: ChasePolicy(spell_a, bindings_a),
            second.id: ChasePolicy(spell_b, bindings_b),
        }
    else:
        script_a, script_b = policy
        policies = {
            first.id: ScriptedPolicy(spell_a, bindings_a, script_a),
            second.id: ScriptedPolicy(spell_b, bindings_b, script_b),
        }
    frames = []
    for _ in range(max_ticks):
        policies[first.id].act(arena, first.id, second.id)
        policies[second.id].act(arena, second.id, first.id)
        arena.tick()
        frames.append(_frame(arena, arena.tick_count - 1))
        if not first.alive or not second.alive:
            break
    if first.alive and not second.alive:
        winner = first.id
    elif second.alive and not first.alive:
        winner = second.id
    else:
        winner = None
    final_stats = {
        e.id: {
            "health": e.health,
            "speed": e.speed,
            "defense": e.defense,
            "mana": e.mana,
        }
        for e in (first, second)
    }
    return DuelResult(
        winner=winner,
        ticks=arena.tick_count,
        final_stats=final_stats,
        trace=tuple(arena.trace),
        frames=tuple(frames),
    )
