"""Duel two hand-built spells and inspect the deterministic trace.

The same seed always reproduces the same duel byte for byte; the trace and
per-tick frames are what the browser playground replays.
"""

from spellforge import EffectsMatrix, ResolvedStatuses, SpellSpec, run_duel
from spellforge.sim import trace_to_jsonl

dot_bolt = SpellSpec(
    type_index=0,
    statuses=ResolvedStatuses(power=20.0, speed=8.0, area=1.0, color=(230, 57, 70)),
    effects=EffectsMatrix.from_rows([[-1, 0, 0, 0]] + [[0] * 4] * 3),
    cost=16.0,
    prompt="a strong crimson bolt that sears the enemy's flesh",
)

slow_trap = SpellSpec(
    type_index=3,
    statuses=ResolvedStatuses(power=10.0, speed=5.0, area=2.0, color=(82, 183, 136)),
    effects=EffectsMatrix.from_rows([[-1, -1, 0, 0]] + [[0] * 4] * 3),
    cost=26.0,
    prompt="a trap that sears the enemy and holds them to the ground",
)

result = run_duel(dot_bolt, slow_trap, seed=7, max_ticks=2400)

outcome = "draw" if result.winner is None else f"entity {result.winner} wins"
print(f"{outcome} after {result.ticks} ticks ({result.ticks * 0.05:.1f}s simulated)")
for entity_id, final in result.final_stats.items():
    print(f"  entity {entity_id}: health {final['health']:.1f}  mana {final['mana']:.1f}")

print("\nfirst casts and hits:")
interesting = [e for e in result.trace if e.kind in ("Cast", "TriggerFired", "EntityDefeated")]
for event in interesting[:8]:
    print(f"  tick {event.tick:>4}  {event.kind:<14} {event.payload}")

lines = trace_to_jsonl(list(result.trace)).splitlines()
print(f"\nfull trace: {len(lines)} events over {len(result.frames)} frames")
rerun = run_duel(dot_bolt, slow_trap, seed=7, max_ticks=2400)
print("rerun byte-identical:", trace_to_jsonl(list(rerun.trace)).splitlines() == lines)
