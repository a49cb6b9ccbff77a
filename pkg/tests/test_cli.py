import json

import pytest

import spellforge.cli as cli
from spellforge.core import spec_from_json
from spellforge.textmodel.linear import load_model


def run(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestUsageErrors:
    def test_unknown_flag_exits_one(self, capsys):
        code, _, err = run(capsys, ["dataset", "gen", "--nope"])
        assert code == 1
        assert "usage" in err.lower() or "error" in err.lower()

    def test_missing_subcommand_exits_one(self, capsys):
        code, _, _ = run(capsys, [])
        assert code == 1

    def test_unknown_subcommand_exits_one(self, capsys):
        code, _, _ = run(capsys, ["transmute"])
        assert code == 1


class TestDatasetCommands:
    def test_gen_then_stats_conserves_counts(self, capsys, tmp_path):
        out = tmp_path / "d.jsonl"
        code, _, _ = run(capsys, ["dataset", "gen", "--count", "200", "--seed", "3",
                                  "--out", str(out)])
        assert code == 0
        assert sum(1 for _ in open(out)) == 200
        code, stdout, _ = run(capsys, ["dataset", "stats", str(out), "--json"])
        assert code == 0
        report = json.loads(stdout)
        assert sum(report["type_counts"]) == report["total"] == 200

    def test_stats_human_output_lists_five_types(self, capsys, tmp_path):
        out = tmp_path / "d.jsonl"
        run(capsys, ["dataset", "gen", "--count", "50", "--seed", "3", "--out", str(out)])
        code, stdout, _ = run(capsys, ["dataset", "stats", str(out)])
        assert code == 0
        for name in ("Projectile", "Fireball", "Thunder", "Trap", "AreaEffect"):
            assert name in stdout

    def test_gen_determinism_bytewise(self, capsys, tmp_path):
        first, second = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        run(capsys, ["dataset", "gen", "--count", "60", "--seed", "8", "--out", str(first)])
        run(capsys, ["dataset", "gen", "--count", "60", "--seed", "8", "--out", str(second)])
        assert first.read_bytes() == second.read_bytes()


class TestTrainEvalCommands:
    def test_train_missing_data_exits_two_and_names_file(self, capsys, tmp_path):
        code, _, err = run(capsys, ["train", "--data", str(tmp_path / "missing.jsonl"),
                                    "--out", str(tmp_path / "m.spfm"), "--seed", "1"])
        assert code == 2
        assert "missing.jsonl" in err

    def test_quick_train_and_eval(self, capsys, tmp_path):
        data = tmp_path / "tiny.jsonl"
        model = tmp_path / "tiny.spfm"
        run(capsys, ["dataset", "gen", "--count", "50", "--seed", "5", "--out", str(data)])
        code, _, err = run(capsys, ["train", "--data", str(data), "--out", str(model),
                                    "--seed", "1", "--epochs", "3"])
        assert code == 0 and "loss" in err
        assert load_model(model).meta.epochs == 3
        code, stdout, _ = run(capsys, ["eval", "--model", str(model), "--data", str(data),
                                       "--json"])
        assert code == 0
        metrics = json.loads(stdout)
        assert {"type_accuracy", "status_mae", "effect_cell_accuracy"} <= set(metrics)

    def test_eval_corrupt_model_exits_two(self, capsys, tmp_path):
        bogus = tmp_path / "bogus.spfm"
        bogus.write_bytes(b"JUNKJUNKJUNK")
        data = tmp_path / "d.jsonl"
        run(capsys, ["dataset", "gen", "--count", "10", "--seed", "5", "--out", str(data)])
        code, _, err = run(capsys, ["eval", "--model", str(bogus), "--data", str(data)])
        assert code == 2
        assert "not a spellforge model" in err


class TestForgeCommand:
    def test_json_output_is_a_spell_spec(self, capsys, model_path):
        code, stdout, _ = run(capsys, ["forge", "a fast fireball", "--model", str(model_path),
                                       "--json"])
        assert code == 0
        spec = spec_from_json(stdout)
        assert spec.prompt == "a fast fireball"
        assert spec.cost >= 1.0

    def test_human_output_names_the_type(self, capsys, model_path):
        code, stdout, _ = run(capsys, ["forge", "A trap that holds the enemy to the ground",
                                       "--model", str(model_path)])
        assert code == 0
        assert "Trap" in stdout and "mana" in stdout

    def test_missing_model_exits_two(self, capsys, tmp_path):
        code, _, err = run(capsys, ["forge", "a bolt", "--model", str(tmp_path / "no.spfm")])
        assert code == 2
        assert "no.spfm" in err


class TestDuelCommand:
    @pytest.fixture()
    def spell_files(self, capsys, tmp_path, model_path):
        paths = []
        for name, prompt in (("a.json", "a devastating crimson fireball that streaks swiftly"),
                             ("b.json", "A trap that holds the enemy to the ground")):
            code, stdout, _ = run(capsys, ["forge", prompt, "--model", str(model_path), "--json"])
            assert code == 0
            path = tmp_path / name
            path.write_text(stdout)
            paths.append(path)
        return paths

    def test_duel_json_deterministic(self, capsys, spell_files):
        argv = ["duel", "--spell-a", str(spell_files[0]), "--spell-b", str(spell_files[1]),
                "--seed", "4", "--max-ticks", "400", "--json"]
        code, first, _ = run(capsys, argv)
        assert code == 0
        result = json.loads(first)
        assert {"winner", "ticks", "final_stats", "trace", "frames"} <= set(result)
        code, second, _ = run(capsys, argv)
        assert first == second

    def test_duel_human_summary(self, capsys, spell_files):
        code, stdout, _ = run(capsys, ["duel", "--spell-a", str(spell_files[0]),
                                       "--spell-b", str(spell_files[1]), "--seed", "4",
                                       "--max-ticks", "400"])
        assert code == 0
        assert "ticks" in stdout and "entity" in stdout

    def test_invalid_spell_file_exits_two(self, capsys, tmp_path, spell_files):
        broken = tmp_path / "broken.json"
        broken.write_text('{"type": 1}')
        code, _, err = run(capsys, ["duel", "--spell-a", str(broken),
                                    "--spell-b", str(spell_files[1]), "--seed", "1"])
        assert code == 2
        assert "malformed" in err


class TestServeCommand:
    def test_serve_wires_arguments(self, capsys, monkeypatch, model_path):
        calls = {}

        def fake_serve(**kwargs):
            calls.update(kwargs)

        import spellforge.service

        monkeypatch.setattr(spellforge.service, "serve", fake_serve)
        code, _, _ = run(capsys, ["serve", "--port", "9999", "--model", str(model_path),
                                  "--cors", "http://localhost:5173"])
        assert code == 0
        assert calls["port"] == 9999
        assert calls["cors_origin"] == "http://localhost:5173"
