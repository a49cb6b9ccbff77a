"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 runtime error. With --json the
machine-readable result goes to stdout and diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from .config import default_config, load_config
from .core import spec_from_json, spec_to_dict, validate_spec
from .dataset import (
    DatasetError,
    GrammarError,
    default_grammar,
    generate,
    load_grammar,
    read_jsonl,
    stats,
    write_jsonl,
)
from .forge import ForgeValidationError, forge
from .sim import run_duel
from .textmodel.backend import BackendError, BuiltinBackend
from .textmodel.linear import (
    ModelFormatError,
    TrainingDivergedError,
    evaluate,
    load_model,
    save_model,
    train,
)

RUNTIME_ERRORS = (
    OSError,
    ValueError,
    DatasetError,
    GrammarError,
    ModelFormatError,
    TrainingDivergedError,
    BackendError,
    ForgeValidationError,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage problems exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> _Parser:
    parser = _Parser(prog="spellforge", description="Forge spells from prompts and duel them.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    dataset = sub.add_parser("dataset", help="generate or inspect datasets")
    dataset_sub = dataset.add_subparsers(dest="dataset_command", required=True, parser_class=_Parser)
    gen = dataset_sub.add_parser("gen", help="generate a synthetic labeled dataset")
    gen.add_argument("--count", type=int, required=True)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--out", required=True)
    gen.add_argument("--grammar", help="grammar JSON file (default: bundled grammar)")
    stats_cmd = dataset_sub.add_parser("stats", help="distribution report for a dataset")
    stats_cmd.add_argument("file")
    stats_cmd.add_argument("--json", action="store_true")

    train_cmd = sub.add_parser("train", help="train the builtin linear model")
    train_cmd.add_argument("--data", required=True)
    train_cmd.add_argument("--out", required=True)
    train_cmd.add_argument("--seed", type=int, required=True)
    train_cmd.add_argument("--epochs", type=int, default=50)
    train_cmd.add_argument("--batch", type=int, default=32)
    train_cmd.add_argument("--lr", type=float, default=0.1)

    eval_cmd = sub.add_parser("eval", help="evaluate a model on a labeled dataset")
    eval_cmd.add_argument("--model", required=True)
    eval_cmd.add_argument("--data", required=True)
    eval_cmd.add_argument("--json", action="store_true")

    forge_cmd = sub.add_parser("forge", help="compile a prompt into a spell")
    forge_cmd.add_argument("prompt")
    forge_cmd.add_argument("--model", required=True)
    forge_cmd.add_argument("--config", help="engine config JSON (default: bundled)")
    forge_cmd.add_argument("--json", action="store_true")

    duel = sub.add_parser("duel", help="run a deterministic duel between two spell files")
    duel.add_argument("--spell-a", required=True)
    duel.add_argument("--spell-b", required=True)
    duel.add_argument("--seed", type=int, required=True)
    duel.add_argument("--max-ticks", type=int, default=2400)
    duel.add_argument("--json", action="store_true")

    serve_cmd = sub.add_parser("serve", help="serve the HTTP API and UI bundle")
    serve_cmd.add_argument("--port", type=int, default=8000)
    serve_cmd.add_argument("--model", required=True)
    serve_cmd.add_argument("--config")
    serve_cmd.add_argument("--static-dir")
    serve_cmd.add_argument("--cors", help="allow this origin (dev mode)")
    serve_cmd.add_argument("--host", default="127.0.0.1")

    return parser


def _engine_config(path: str | None):
    return load_config(path) if path else default_config()


def _cmd_dataset_gen(args) -> int:
    grammar = load_grammar(args.grammar) if args.grammar else default_grammar()
    config = default_config()
    examples = generate(
        args.count, args.seed, grammar, registry=config.registry, bounds=config.bounds()
    )
    write_jsonl(examples, args.out)
    print(f"wrote {len(examples)} examples to {args.out}")
    return 0


def _cmd_dataset_stats(args) -> int:
    config = default_config()
    examples = read_jsonl(args.file, registry=config.registry, bounds=config.bounds())
    report = stats(examples, registry=config.registry, bounds=config.bounds())
    if args.json:
        print(json.dumps(report.to_dict()))
        return 0
    print(f"total: {report.total}")
    for entry, count in zip(config.registry.entries, report.type_counts):
        share = count / report.total if report.total else 0.0
        print(f"  {entry.index} {entry.name:<12} {count:>6}  ({share:.1%})")
    nonzero = sum(report.cell_nonzero_counts)
    print(f"nonzero effect cells: {nonzero}")
    print(f"balance: {'UNBALANCED' if report.unbalanced else 'ok'}")
    return 0


def _cmd_train(args) -> int:
    config = default_config()
    examples = read_jsonl(args.data, registry=config.registry, bounds=config.bounds())
    model = train(
        examples,
        seed=args.seed,
        epochs=args.epochs,
        batch=args.batch,
        learning_rate=args.lr,
        registry=config.registry,
        bounds=config.bounds(),
    )
    save_model(model, args.out)
    trace = model.meta.loss_trace
    print(
        f"trained {model.model_id} on {len(examples)} examples: "
        f"loss {trace[0]:.4f} -> {trace[-1]:.4f}; saved to {args.out}",
        file=sys.stderr,
    )
    return 0


def _cmd_eval(args) -> int:
    config = default_config()
    model = load_model(args.model)
    examples = read_jsonl(args.data, registry=config.registry, bounds=config.bounds())
    metrics = evaluate(model, examples)
    if args.json:
        print(json.dumps(metrics))
        return 0
    print(f"type accuracy:         {metrics['type_accuracy']:.3f}")
    for name, mae in zip(("power", "speed", "area", "color"), metrics["status_mae"]):
        print(f"{name:<6} MAE (raw):      {mae:.3f}")
    print(f"effect macro accuracy: {metrics['effect_macro_accuracy']:.3f}")
    worst = min(metrics["effect_cell_accuracy"])
    print(f"worst cell accuracy:   {worst:.3f}")
    return 0


def _cmd_forge(args) -> int:
    config = _engine_config(args.config)
    model = load_model(args.model)
    backend = BuiltinBackend(model)
    forged = forge(
        args.prompt, backend, config.registry, config.ranges, config.cost, config.effect
    )
    if args.json:
        print(json.dumps(spec_to_dict(forged.spec)))
        return 0
    spec = forged.spec
    entry = config.registry[spec.type_index]
    print(f"{entry.name} (type {spec.type_index})  — cost {spec.cost:.2f} mana")
    print(
        f"  power {spec.statuses.power:.2f}  speed {spec.statuses.speed:.2f}  "
        f"area {spec.statuses.area:.2f}  color rgb{spec.statuses.color}"
    )
    for row in spec.effects.rows:
        print("  " + " ".join(f"{cell:+d}" if cell else " 0" for cell in row))
    print(f"  forged in {forged.total_ms:.1f} ms (predict {forged.predict_ms:.1f} ms)")
    return 0


def _cmd_duel(args) -> int:
    config = default_config()
    with open(args.spell_a, encoding="utf-8") as handle:
        spell_a = spec_from_json(handle.read())
    with open(args.spell_b, encoding="utf-8") as handle:
        spell_b = spec_from_json(handle.read())
    for label, spec in (("spell-a", spell_a), ("spell-b", spell_b)):
        violations = validate_spec(spec, config.registry, config.ranges)
        if violations:
            raise ValueError(f"{label}: {'; '.join(violations)}")
    result = run_duel(
        spell_a,
        spell_b,
        seed=args.seed,
        max_ticks=args.max_ticks,
        registry=config.registry,
        effect_config=config.effect,
    )
    if args.json:
        print(json.dumps(result.to_dict()))
        return 0
    outcome = "draw" if result.winner is None else f"entity {result.winner} wins"
    print(f"{outcome} after {result.ticks} ticks")
    for entity_id, final in result.final_stats.items():
        print(
            f"  entity {entity_id}: health {final['health']:.1f}  mana {final['mana']:.1f}  "
            f"speed {final['speed']:.2f}"
        )
    return 0


def _cmd_serve(args) -> int:
    from .service import serve

    serve(
        port=args.port,
        model_path=args.model,
        static_dir=args.static_dir,
        config_path=args.config,
        cors_origin=args.cors,
        host=args.host,
    )
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {
        ("dataset", "gen"): _cmd_dataset_gen,
        ("dataset", "stats"): _cmd_dataset_stats,
    }
    try:
        if args.command == "dataset":
            return handlers[(args.command, args.dataset_command)](args)
        return {
            "train": _cmd_train,
            "eval": _cmd_eval,
            "forge": _cmd_forge,
            "duel": _cmd_duel,
            "serve": _cmd_serve,
        }[args.command](args)
    except RUNTIME_ERRORS as exc:
        print(f"spellforge: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
