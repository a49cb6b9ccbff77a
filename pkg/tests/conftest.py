"""Shared fixtures: engine config, the reference-trained model, helpers."""

from __future__ import annotations

import random

import pytest

import spellforge as sf
from spellforge.cli import main as cli_main
from spellforge.core import EffectsMatrix, ResolvedStatuses, SpellSpec
from spellforge.textmodel.linear import load_model, train

# acceptance criteria results, printed as one line each at session end
ACCEPTANCE_RESULTS: dict[int, tuple[str, bool, str]] = {}


def record_criterion(number: int, name: str, passed: bool, detail: str = "") -> None:
    ACCEPTANCE_RESULTS[number] = (name, bool(passed), detail)
    assert passed, f"acceptance criterion {number} ({name}) failed: {detail}"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        name, passed, detail = ACCEPTANCE_RESULTS[number]
        status = "PASS" if passed else "FAIL"
        suffix = f"  [{detail}]" if detail else ""
        terminalreporter.write_line(f"criterion {number:>2} ({name}): {status}{suffix}")


@pytest.fixture(scope="session")
def engine_config():
    return sf.default_config()


@pytest.fixture(scope="session")
def grammar():
    return sf.default_grammar()


@pytest.fixture(scope="session")
def corpus2000(grammar, engine_config):
    return sf.generate(
        2000, seed=1, grammar=grammar,
        registry=engine_config.registry, bounds=engine_config.bounds(),
    )


@pytest.fixture(scope="session")
def work_dir(tmp_path_factory):
    return tmp_path_factory.mktemp("spellforge")


@pytest.fixture(scope="session")
def model_path(work_dir):
    """Model produced by the documented CLI recipe: gen 2000/seed 1, train seed 42."""
    data = work_dir / "reference.jsonl"
    model = work_dir / "reference.spfm"
    assert cli_main(["dataset", "gen", "--count", "2000", "--seed", "1", "--out", str(data)]) == 0
    assert cli_main(["train", "--data", str(data), "--out", str(model), "--seed", "42"]) == 0
    return model


@pytest.fixture(scope="session")
def trained_model(model_path):
    return load_model(model_path)


@pytest.fixture(scope="session")
def split_sets(corpus2000):
    return sf.split(corpus2000, 0.2, seed=7)


@pytest.fixture(scope="session")
def split_model(split_sets, engine_config):
    train_set, _ = split_sets
    return train(
        train_set, seed=42, registry=engine_config.registry, bounds=engine_config.bounds()
    )


def random_matrix(rng: random.Random) -> EffectsMatrix:
    return EffectsMatrix.from_rows(
        [[rng.choice((-1, 0, 1)) for _ in range(4)] for _ in range(4)]
    )


def random_spec(rng: random.Random, config) -> SpellSpec:
    from spellforge.paramize import compute_cost, resolve_color, resolve_status
    from spellforge.core import StatusVector

    raws = StatusVector(*(rng.uniform(0.0, 4.0) for _ in range(4)))
    matrix = random_matrix(rng)
    type_index = rng.randrange(len(config.registry))
    return SpellSpec(
        type_index=type_index,
        statuses=ResolvedStatuses(
            power=resolve_status(raws.power, config.ranges["power"]),
            speed=resolve_status(raws.speed, config.ranges["speed"]),
            area=resolve_status(raws.area, config.ranges["area"]),
            color=resolve_color(raws.color, config.ranges["color"]),
        ),
        effects=matrix,
        cost=compute_cost(type_index, raws, matrix, config.cost),
        prompt="random",
        model_id="test",
    )
