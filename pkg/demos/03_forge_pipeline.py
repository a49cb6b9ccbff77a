"""Compile prompts into complete spells through the full forge pipeline.

Trains a quick model in-process; with a saved model file you would use
`spellforge forge "<prompt>" --model model.spfm` instead.
"""

from spellforge import default_config, default_grammar, forge, generate
from spellforge.textmodel import BuiltinBackend, train

config = default_config()
examples = generate(1500, seed=1, grammar=default_grammar(),
                    registry=config.registry, bounds=config.bounds())
backend = BuiltinBackend(train(examples, seed=42, epochs=30,
                               registry=config.registry, bounds=config.bounds()))

prompts = [
    "A trap that holds the enemy to the ground",
    "a devastating azure fireball that streaks swiftly",
    "a colossal emerald field that drains the life of everything nearby",
]

for prompt in prompts:
    forged = forge(prompt, backend, config.registry, config.ranges,
                   config.cost, config.effect)
    spec = forged.spec
    entry = config.registry[spec.type_index]
    print(f"\n> {prompt}")
    print(f"  {entry.name} — {spec.cost:.2f} mana "
          f"(forged in {forged.total_ms:.2f} ms)")
    print(f"  power {spec.statuses.power:.1f}  speed {spec.statuses.speed:.1f}  "
          f"area {spec.statuses.area:.1f}  color rgb{spec.statuses.color}")
    for row in spec.effects.rows:
        print("   " + " ".join(f"{c:+d}" if c else " ." for c in row))
    for binding in forged.bindings:
        effects = ", ".join(
            f"{'+' if e.sign > 0 else '-'}{e.magnitude_per_second:.1f}/s "
            f"{e.stat.name.title()} for {e.duration:.0f}s"
            for e in binding.effects
        )
        print(f"  {binding.trigger.name}: {effects}")
