"""Generate a labeled corpus, train the linear model, and evaluate it.

The grammar renders prompts whose wording implies the labels, so the corpus
is separable by construction; a hashed-n-gram linear model learns it in
seconds. Expect a couple of minutes at the full 2000-example size.
"""

from spellforge import default_config, default_grammar, generate, split, stats
from spellforge.textmodel import evaluate, train

config = default_config()
examples = generate(2000, seed=1, grammar=default_grammar(),
                    registry=config.registry, bounds=config.bounds())

report = stats(examples, registry=config.registry, bounds=config.bounds())
print("type distribution:", report.type_counts, "unbalanced:", report.unbalanced)
print("sample prompts:")
for example in examples[:3]:
    print(f"  [{example.type_index}] {example.prompt}")

train_set, test_set = split(examples, 0.2, seed=7)
model = train(train_set, seed=42, registry=config.registry, bounds=config.bounds())
print(f"\ntrained {model.model_id}")
print(f"combined loss {model.meta.loss_trace[0]:.3f} -> {model.meta.loss_trace[-1]:.3f}")

metrics = evaluate(model, test_set)
print(f"held-out type accuracy:  {metrics['type_accuracy']:.3f}")
print("per-status MAE (raw):   ", [round(m, 3) for m in metrics["status_mae"]])
print(f"effect macro accuracy:   {metrics['effect_macro_accuracy']:.3f}")
