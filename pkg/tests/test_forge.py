import pytest

from spellforge.core import validate_spec
from spellforge.forge import ForgedSpell, ForgeValidationError, forge
from spellforge.textmodel.backend import BackendHandle, BuiltinBackend


def forge_with(config, backend, prompt):
    return forge(prompt, backend, config.registry, config.ranges, config.cost, config.effect)


@pytest.fixture(scope="module")
def backend(trained_model):
    return BuiltinBackend(trained_model)


class TestForge:
    def test_trap_prompt_forges_a_trap(self, engine_config, backend):
        forged = forge_with(engine_config, backend, "A trap that holds the enemy to the ground")
        assert forged.spec.type_index == 3
        assert forged.model_id == backend.model_id

    def test_result_passes_validation_and_binding_invariant(self, engine_config, backend):
        forged = forge_with(engine_config, backend, "a devastating azure fireball")
        assert validate_spec(forged.spec, engine_config.registry, engine_config.ranges) == []
        nonzero = len(forged.spec.effects.nonzero_cells())
        assert sum(len(b.effects) for b in forged.bindings) == nonzero
        assert forged.spec.cost >= engine_config.cost.floor

    def test_deterministic_except_timing(self, engine_config, backend):
        first = forge_with(engine_config, backend, "a swift golden dart")
        second = forge_with(engine_config, backend, "a swift golden dart")
        assert first.spec == second.spec
        assert first.bindings == second.bindings

    def test_empty_prompt_fails_before_backend(self, engine_config):
        class ExplodingBackend(BackendHandle):
            model_id = "boom"
            kind = "builtin"

            def predict(self, prompt):
                raise AssertionError("backend must not be called")

        with pytest.raises(ValueError, match="empty"):
            forge_with(engine_config, ExplodingBackend(), "   ")

    def test_timing_fields_recorded(self, engine_config, backend):
        forged = forge_with(engine_config, backend, "a narrow crimson bolt")
        assert forged.total_ms >= forged.predict_ms >= 0.0

    def test_misbehaving_backend_raises_validation_error(self, engine_config):
        from spellforge.core import RawPrediction

        class BadBackend(BackendHandle):
            model_id = "bad"
            kind = "external"

            def predict(self, prompt):
                return RawPrediction((0.7, 0.7, 0.1, 0.1, 0.0), (0,) * 4, (0,) * 16)

        with pytest.raises(ForgeValidationError, match="sum"):
            forge_with(engine_config, BadBackend(), "anything")

    def test_to_dict_shape(self, engine_config, backend):
        forged = forge_with(engine_config, backend, "A trap that holds the enemy to the ground")
        data = forged.to_dict()
        assert data["spec"]["type"] == 3
        assert data["spec"]["effects"][0][1] == -1
        assert {"predict_ms", "total_ms"} <= set(data["timing"])
        assert isinstance(data["bindings"], list)
        breakdown = data["cost_breakdown"]
        assert breakdown["base"] == engine_config.cost.base_costs[3]
        total = breakdown["base"] + breakdown["statuses"] + breakdown["effects"]
        assert data["spec"]["cost"] == pytest.approx(max(engine_config.cost.floor, total))
