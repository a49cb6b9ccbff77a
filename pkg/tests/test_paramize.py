import math
import random

import pytest
from hypothesis import given, strategies as st

from spellforge.config import default_config
from spellforge.core import EffectsMatrix, RangeSequence, StatusVector
from spellforge.paramize import CostConfig, compute_cost, resolve_color, resolve_status

V3 = RangeSequence("power", (0.0, 10.0, 20.0))


class TestResolveStatus:
    def test_interpolates_between_anchors(self):
        assert resolve_status(1.5, V3) == 15.0

    def test_left_endpoint_identity(self):
        assert resolve_status(0.0, V3) == 0.0

    def test_clamps_above_domain_to_last_anchor(self):
        assert resolve_status(7.3, V3) == 20.0

    def test_clamps_below_domain_to_first_anchor(self):
        assert resolve_status(-2.0, V3) == 0.0

    def test_right_endpoint_exact(self):
        assert resolve_status(2.0, V3) == 20.0

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            resolve_status(math.nan, V3)
        with pytest.raises(ValueError):
            resolve_status(math.inf, V3)

    def test_sequence_needs_two_values(self):
        with pytest.raises(ValueError, match="at least 2"):
            RangeSequence("power", (1.0,))

    def test_equals_anchor_at_every_integer_knot(self):
        rng = random.Random(3)
        for _ in range(100):
            n = rng.randint(2, 9)
            values = tuple(rng.uniform(-50, 50) for _ in range(n))
            seq = RangeSequence("s", values)
            for i in range(n):
                assert resolve_status(float(i), seq) == values[i]

    def test_piecewise_linear_at_midpoints(self):
        rng = random.Random(4)
        for _ in range(100):
            n = rng.randint(2, 9)
            values = tuple(rng.uniform(-50, 50) for _ in range(n))
            seq = RangeSequence("s", values)
            for i in range(n - 1):
                expected = (values[i] + values[i + 1]) / 2.0
                assert resolve_status(i + 0.5, seq) == pytest.approx(expected, abs=1e-12)

    @given(
        values=st.lists(st.floats(min_value=-100, max_value=100), min_size=2, max_size=8),
        a=st.floats(min_value=0, max_value=7),
        b=st.floats(min_value=0, max_value=7),
    )
    def test_monotone_for_non_decreasing_sequences(self, values, a, b):
        ordered = tuple(sorted(values))
        seq = RangeSequence("s", ordered)
        lo, hi = min(a, b), max(a, b)
        assert resolve_status(lo, seq) <= resolve_status(hi, seq) + 1e-9


class TestResolveColor:
    def test_midpoint_rounds_half_up(self):
        palette = RangeSequence("color", ((0, 0, 0), (255, 255, 255)))
        assert resolve_color(0.5, palette) == (128, 128, 128)

    def test_left_endpoint(self):
        palette = RangeSequence("color", ((255, 0, 0), (0, 0, 255)))
        assert resolve_color(0.0, palette) == (255, 0, 0)

    def test_right_endpoint_via_clamp(self):
        palette = RangeSequence("color", ((255, 0, 0), (0, 0, 255)))
        assert resolve_color(1.0, palette) == (0, 0, 255)
        assert resolve_color(9.0, palette) == (0, 0, 255)

    def test_channels_interpolated_independently(self):
        palette = RangeSequence("color", ((100, 0, 50), (200, 40, 0)))
        assert resolve_color(0.25, palette) == (125, 10, 38)  # 37.5 rounds up


class TestComputeCost:
    def test_trap_example_with_default_config(self):
        # raw = normalized * 4 with the default bounds of 4
        config = default_config().cost
        statuses = StatusVector(power=2.0, speed=0.0, area=2.0, color=0.8)
        matrix = EffectsMatrix.from_rows([[0, -1, 0, 0]] + [[0] * 4] * 3)
        cost = compute_cost(3, statuses, matrix, config)
        assert cost == pytest.approx(25.45)

    def test_zero_features_cost_exactly_base(self):
        config = default_config().cost
        statuses = StatusVector(0.0, 0.0, 0.0, 0.0)
        for type_index, base in enumerate(config.base_costs):
            assert compute_cost(type_index, statuses, EffectsMatrix.zeros(), config) == base

    def test_self_harm_cell_discounts_by_three_never_below_floor(self):
        config = default_config().cost
        statuses = StatusVector(2.0, 0.0, 2.0, 0.8)
        matrix = EffectsMatrix.from_rows([[0, -1, 0, 0]] + [[0] * 4] * 3)
        base_cost = compute_cost(3, statuses, matrix, config)
        with_self_harm = EffectsMatrix.from_rows(
            [[0, -1, 0, 0], [-1, 0, 0, 0]] + [[0] * 4] * 2
        )
        discounted = compute_cost(3, statuses, with_self_harm, config)
        assert discounted == pytest.approx(base_cost - 3.0)
        assert discounted >= config.floor

    def test_unknown_type_rejected(self):
        config = default_config().cost
        with pytest.raises(ValueError, match="unknown type"):
            compute_cost(9, StatusVector(0, 0, 0, 0), EffectsMatrix.zeros(), config)

    def test_cell_override_takes_precedence(self):
        config = default_config().cost
        custom = CostConfig(
            base_costs=config.base_costs,
            status_weights=config.status_weights,
            cell_weights=config.cell_weights,
            cell_overrides={(0, 1, -1): 9.0},
            status_bounds=config.status_bounds,
        )
        matrix = EffectsMatrix.from_rows([[0, -1, 0, 0]] + [[0] * 4] * 3)
        statuses = StatusVector(0, 0, 0, 0)
        assert compute_cost(3, statuses, matrix, custom) == pytest.approx(
            custom.base_costs[3] + 9.0
        )

    @given(st.floats(min_value=0, max_value=4), st.floats(min_value=0, max_value=4))
    def test_monotone_in_statuses_with_non_negative_weights(self, lo, hi):
        config = default_config().cost
        lo, hi = min(lo, hi), max(lo, hi)
        matrix = EffectsMatrix.zeros()
        cheap = compute_cost(0, StatusVector(lo, 1.0, 1.0, 1.0), matrix, config)
        rich = compute_cost(0, StatusVector(hi, 1.0, 1.0, 1.0), matrix, config)
        assert cheap <= rich + 1e-12

    def test_adding_negative_weight_cell_never_increases_cost(self):
        config = default_config().cost
        negative_cells = [
            (row, col, sign)
            for (row, sign), weight in config.cell_weights.items()
            if weight < 0
            for col in range(4)
        ]
        rng = random.Random(10)
        for _ in range(300):
            statuses = StatusVector(*(rng.uniform(0, 4) for _ in range(4)))
            rows = [[rng.choice((-1, 0, 1)) for _ in range(4)] for _ in range(4)]
            row, col, sign = rng.choice(negative_cells)
            rows[row][col] = 0
            before = compute_cost(1, statuses, EffectsMatrix.from_rows(rows), config)
            rows[row][col] = sign
            after = compute_cost(1, statuses, EffectsMatrix.from_rows(rows), config)
            assert after <= before + 1e-12

    def test_floor_holds_for_random_spells(self):
        config = default_config().cost
        rng = random.Random(11)
        for _ in range(1000):
            statuses = StatusVector(*(rng.uniform(0, 4) for _ in range(4)))
            rows = [[rng.choice((-1, 0, 1)) for _ in range(4)] for _ in range(4)]
            type_index = rng.randrange(5)
            cost = compute_cost(type_index, statuses, EffectsMatrix.from_rows(rows), config)
            assert cost >= config.floor
