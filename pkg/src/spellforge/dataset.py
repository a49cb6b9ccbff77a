"""Synthetic labeled-example generation, JSONL storage, splits, and stats.

Labels come from a template grammar: each slot filler carries the status
values and matrix cells its wording implies, so every generated prompt is
consistent with its label by construction. The grammar file schema is
documented in docs/grammar.md.
"""

from __future__ import annotations

import json
import math
import random
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .core import EffectsMatrix, SpellTypeRegistry

HISTOGRAM_BINS = 10
BALANCE_THRESHOLD = 0.10
_SLOT_PATTERN = re.compile(r"\{(\w+)\}")


class DatasetError(Exception):
    """Malformed dataset file or label; carries the offending line when known."""


class GrammarError(Exception):
    pass


@dataclass(frozen=True)
class Example:
    prompt: str
    type_index: int
    status_raws: tuple[float, float, float, float]
    effects: EffectsMatrix


@dataclass(frozen=True)
class SlotFiller:
    text: str
    statuses: dict[str, float] = field(default_factory=dict)
    cells: tuple[tuple[int, int, int], ...] = ()


@dataclass(frozen=True)
class TemplateGrammar:
    """Per-type template strings plus the shared slot filler pools."""

    slots: dict[str, tuple[SlotFiller, ...]]
    templates: dict[int, tuple[str, ...]]

    def validate(self, registry: SpellTypeRegistry) -> None:
        for entry in registry.entries:
            if not self.templates.get(entry.index):
                raise GrammarError(f"no templates for type {entry.index} ({entry.name})")
        for type_index, templates in self.templates.items():
            for template in templates:
                for slot in _SLOT_PATTERN.findall(template):
                    if not self.slots.get(slot):
                        raise GrammarError(
                            f"template for type {type_index} references empty slot {slot!r}"
                        )


def grammar_from_dict(data: dict) -> TemplateGrammar:
    try:
        slots = {
            name: tuple(
                SlotFiller(
                    text=str(f["text"]),
                    statuses={k: float(v) for k, v in f.get("statuses", {}).items()},
                    cells=tuple(
                        (int(c[0]), int(c[1]), int(c[2])) for c in f.get("cells", [])
                    ),
                )
                for f in fillers
            )
            for name, fillers in data["slots"].items()
        }
        templates = {
            int(type_index): tuple(str(t) for t in entries)
            for type_index, entries in data["types"].items()
        }
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise GrammarError(f"malformed grammar: {exc}") from exc
    return TemplateGrammar(slots=slots, templates=templates)


def load_grammar(path: str | Path) -> TemplateGrammar:
    return grammar_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def default_grammar() -> TemplateGrammar:
    text = resources.files("spellforge").joinpath("data/grammar.json").read_text("utf-8")
    return grammar_from_dict(json.loads(text))


def _render(
    template: str,
    grammar: TemplateGrammar,
    rng: random.Random,
    bounds: tuple[float, float, float, float],
) -> tuple[str, dict[str, float], dict[tuple[int, int], int]]:
    statuses: dict[str, float] = {}
    cells: dict[tuple[int, int], int] = {}

    def substitute(match: re.Match) -> str:
        filler = rng.choice(grammar.slots[match.group(1)])
        statuses.update(filler.statuses)
        for row, col, value in filler.cells:
            if not (0 <= row < 4 and 0 <= col < 4 and value in (-1, 0, 1)):
                raise GrammarError(f"filler {filler.text!r} sets invalid cell {(row, col, value)}")
            cells[(row, col)] = value
        return filler.text

    prompt = _SLOT_PATTERN.sub(substitute, template)
    bound_by_name = dict(zip(("power", "speed", "area", "color"), bounds))
    for name, value in statuses.items():
        limit = bound_by_name.get(name)
        if limit is None or not (0.0 <= value <= limit):
            raise GrammarError(f"filler sets status {name}={value} outside [0, {limit}]")
    return prompt, statuses, cells


def generate(
    count: int,
    seed: int,
    grammar: TemplateGrammar,
    registry: SpellTypeRegistry | None = None,
    bounds: tuple[float, float, float, float] = (4.0, 4.0, 4.0, 4.0),
    max_retries_per_example: int = 200,
) -> list[Example]:
    """Draw `count` unique labeled examples, deterministically under `seed`.

    Types, templates, and slot fillers are all drawn uniformly. Exact
    duplicate prompts are redrawn; the retry budget guards degenerate
    grammars.
    """
    if count <= 0:
        raise ValueError("count must be positive")
    registry = registry or SpellTypeRegistry.default()
    grammar.validate(registry)
    rng = random.Random(seed)
    examples: list[Example] = []
    seen: set[str] = set()
    defaults = {name: bound / 2.0 for name, bound in
                zip(("power", "speed", "area", "color"), bounds)}
    for _ in range(count):
        for _attempt in range(max_retries_per_example):
            type_index = rng.randrange(len(registry))
            template = rng.choice(grammar.templates[type_index])
            prompt, statuses, cells = _render(template, grammar, rng, bounds)
            if prompt in seen:
                continue
            seen.add(prompt)
            raws = tuple(
                statuses.get(name, defaults[name])
                for name in ("power", "speed", "area", "color")
            )
            matrix_rows = [[0] * 4 for _ in range(4)]
            for (row, col), value in cells.items():
                matrix_rows[row][col] = value
            examples.append(
                Example(
                    prompt=prompt,
                    type_index=type_index,
                    status_raws=raws,  # type: ignore[arg-type]
                    effects=EffectsMatrix.from_rows(matrix_rows),
                )
            )
            break
        else:
            raise GrammarError(
                f"retry budget exhausted after {len(examples)} unique examples; "
                "grammar cannot produce enough distinct prompts"
            )
    return examples


def example_to_dict(example: Example) -> dict:
    return {
        "prompt": example.prompt,
        "type": example.type_index,
        "statuses": list(example.status_raws),
        "effects": example.effects.to_lists(),
    }


def _example_from_dict(data: dict) -> Example:
    return Example(
        prompt=str(data["prompt"]),
        type_index=int(data["type"]),
        status_raws=tuple(float(v) for v in data["statuses"]),  # type: ignore[arg-type]
        effects=EffectsMatrix.from_rows(data["effects"]),
    )


def validate_labels(
    example: Example,
    registry: SpellTypeRegistry,
    bounds: tuple[float, float, float, float] = (4.0, 4.0, 4.0, 4.0),
) -> list[str]:
    violations = []
    if not example.prompt.strip():
        violations.append("empty prompt")
    if not registry.contains(example.type_index):
        violations.append(f"unknown type index {example.type_index}")
    if len(example.status_raws) != 4:
        violations.append(f"expected 4 status values, got {len(example.status_raws)}")
    else:
        for name, value, bound in zip(
            ("power", "speed", "area", "color"), example.status_raws, bounds
        ):
            if not (math.isfinite(value) and 0.0 <= value <= bound):
                violations.append(f"status {name} = {value} outside [0, {bound}]")
    violations.extend(example.effects.problems())
    return violations


def write_jsonl(examples: list[Example], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for example in examples:
            handle.write(json.dumps(example_to_dict(example)) + "\n")


def read_jsonl(
    path: str | Path,
    registry: SpellTypeRegistry | None = None,
    bounds: tuple[float, float, float, float] = (4.0, 4.0, 4.0, 4.0),
) -> list[Example]:
    """Read and validate a dataset; malformed lines fail with their number."""
    registry = registry or SpellTypeRegistry.default()
    examples: list[Example] = []
    with open(path, "r", encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                example = _example_from_dict(json.loads(line))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise DatasetError(f"line {line_number}: malformed example: {exc}") from exc
            violations = validate_labels(example, registry, bounds)
            if violations:
                raise DatasetError(f"line {line_number}: {'; '.join(violations)}")
            examples.append(example)
    return examples


def split(
    examples: list[Example], test_fraction: float, seed: int
) -> tuple[list[Example], list[Example]]:
    """Seeded, type-stratified split into (train, test).

    Per-type test counts follow largest-remainder apportionment, so each
    type's test share is within one example of the global fraction.
    """
    if not (0.0 < test_fraction < 1.0):
        raise ValueError(f"test fraction must be in (0, 1), got {test_fraction}")
    rng = random.Random(seed)
    by_type: dict[int, list[int]] = {}
    for position, example in enumerate(examples):
        by_type.setdefault(example.type_index, []).append(position)
    total_test = int(math.floor(len(examples) * test_fraction + 0.5))
    quotas: dict[int, int] = {}
    remainders: list[tuple[float, int]] = []
    for type_index, positions in sorted(by_type.items()):
        exact = len(positions) * test_fraction
        quotas[type_index] = int(math.floor(exact))
        remainders.append((exact - math.floor(exact), type_index))
    shortfall = total_test - sum(quotas.values())
    for _, type_index in sorted(remainders, key=lambda item: (-item[0], item[1])):
        if shortfall <= 0:
            break
        if quotas[type_index] < len(by_type[type_index]):
            quotas[type_index] += 1
            shortfall -= 1
    test_positions: set[int] = set()
    for type_index, positions in sorted(by_type.items()):
        shuffled = list(positions)
        rng.shuffle(shuffled)
        test_positions.update(shuffled[: quotas[type_index]])
    train = [e for i, e in enumerate(examples) if i not in test_positions]
    test = [e for i, e in enumerate(examples) if i in test_positions]
    return train, test


@dataclass(frozen=True)
class DistributionReport:
    total: int
    type_counts: tuple[int, ...]
    status_histograms: dict[str, tuple[int, ...]]
    cell_nonzero_counts: tuple[int, ...]
    unbalanced: bool

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "type_counts": list(self.type_counts),
            "status_histograms": {k: list(v) for k, v in self.status_histograms.items()},
            "cell_nonzero_counts": list(self.cell_nonzero_counts),
            "unbalanced": self.unbalanced,
        }


def stats(
    examples: list[Example],
    registry: SpellTypeRegistry | None = None,
    bounds: tuple[float, float, float, float] = (4.0, 4.0, 4.0, 4.0),
) -> DistributionReport:
    """Count types, bin statuses, and tally nonzero cells; flags imbalance."""
    registry = registry or SpellTypeRegistry.default()
    type_counts = [0] * len(registry)
    histograms = {
        name: [0] * HISTOGRAM_BINS for name in ("power", "speed", "area", "color")
    }
    cell_counts = [0] * 16
    for example in examples:
        if registry.contains(example.type_index):
            type_counts[example.type_index] += 1
        for name, value, bound in zip(
            ("power", "speed", "area", "color"), example.status_raws, bounds
        ):
            position = 0 if bound <= 0 else value / bound
            bin_index = min(HISTOGRAM_BINS - 1, max(0, int(position * HISTOGRAM_BINS)))
            histograms[name][bin_index] += 1
        for row, col, _value in example.effects.nonzero_cells():
            cell_counts[row * 4 + col] += 1
    total = len(examples)
    unbalanced = total == 0 or any(
        count < BALANCE_THRESHOLD * total for count in type_counts
    )
    return DistributionReport(
        total=total,
        type_counts=tuple(type_counts),
        status_histograms={k: tuple(v) for k, v in histograms.items()},
        cell_nonzero_counts=tuple(cell_counts),
        unbalanced=unbalanced,
    )
