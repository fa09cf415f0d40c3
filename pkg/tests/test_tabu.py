import numpy as np
import pytest

from bdsw_qaoa import ConfigError, QuboProblem, TabuConfig, TenureError, all_flip_costs, random_assignment, run_tabu
from bdsw_qaoa.graphs import maxcut_to_qubo
from conftest import naive_min, random_qubo


class TestConfig:
    def test_defaults_scale_with_n(self):
        assert TabuConfig.default(800) == TabuConfig(16000, 20)
        assert TabuConfig.default(16) == TabuConfig(320, 2)
        assert TabuConfig.default(16, tenure=5, iterations=None).tenure == 5
        assert TabuConfig.default(1) == TabuConfig(20, 0)

    @pytest.mark.parametrize(
        "kwargs",
        [dict(iterations=0, tenure=0), dict(iterations=5, tenure=-1), dict(iterations=2, tenure=3),
         dict(iterations=5, tenure=1, rule="worst"), dict(iterations=5, tenure=1, tie_break="coin")],
    )
    def test_rejects(self, kwargs):
        with pytest.raises(ConfigError):
            TabuConfig(**kwargs)


class TestRunTabu:
    def test_single_forced_flip(self):
        out = run_tabu(QuboProblem(1, {(0, 0): -1.0}), [0], TabuConfig(1, 1))
        assert out.best_cost == -1
        assert out.best_assignment.tolist() == [1]

    def test_triangle(self, triangle):
        out = run_tabu(maxcut_to_qubo(triangle), [0, 0, 0], TabuConfig(10, 2))
        assert out.best_cost == -2

    def test_random16_finds_optimum(self):
        rng = np.random.default_rng(16)
        q = random_qubo(rng, 16, density=0.5)
        opt = naive_min(q)
        hits = 0
        for seed in range(20):
            out = run_tabu(q, random_assignment(16, seed), TabuConfig(2000, 10, seed=seed))
            hits += abs(out.best_cost - opt) <= 1e-9
        assert hits >= 18

    def test_tenure_overflow(self):
        # the only variable becomes tabu after one move and cannot improve again
        with pytest.raises(TenureError):
            run_tabu(QuboProblem(1, {(0, 0): -1.0}), [0], TabuConfig(2, 1))

    def test_zero_tenure_never_overflows(self):
        out = run_tabu(QuboProblem(1, {(0, 0): -1.0}), [0], TabuConfig(5, 0))
        assert out.best_cost == -1

    @pytest.mark.parametrize("rule, tie", [("best", "random"), ("best", "index"), ("literal", "random")])
    def test_invariants(self, rng, rule, tie):
        n, tau = 30, 4
        q = random_qubo(rng, n, density=0.3)
        x0 = random_assignment(n, 3)
        out = run_tabu(q, x0, TabuConfig(600, tau, seed=5, rule=rule, tie_break=tie))

        assert out.best_cost <= q.evaluate(x0)
        assert np.all(np.diff(out.cost_trace) <= 0)
        assert out.cost_trace[-1] == pytest.approx(out.best_cost)
        assert out.best_cost == q.evaluate(out.best_assignment)
        np.testing.assert_array_equal(out.final_flip_costs, all_flip_costs(q, out.best_assignment))

        last = {}
        for t, (j, asp) in enumerate(zip(out.moves.tolist(), out.aspirated.tolist())):
            if j in last and not asp:
                assert t - last[j] >= tau
            last[j] = t

    def test_literal_rule_takes_largest_magnitude(self, tiny):
        # flip costs at (0,0) are (1, 3); the literal rule flips variable 1 despite worsening
        out = run_tabu(tiny, [0, 0], TabuConfig(1, 1, rule="literal"))
        assert out.moves.tolist() == [1]
        assert out.best_cost == 0

    def test_index_tie_break_is_lowest(self):
        q = QuboProblem(3, {(0, 0): -1.0, (1, 1): -1.0, (2, 2): -1.0})
        out = run_tabu(q, [0, 0, 0], TabuConfig(1, 1, tie_break="index"))
        assert out.moves.tolist() == [0]

    def test_deterministic(self, rng):
        q = random_qubo(rng, 40, density=0.2, integer=True)
        cfg = TabuConfig(800, 4, seed=11)
        a, b = run_tabu(q, random_assignment(40, 1), cfg), run_tabu(q, random_assignment(40, 1), cfg)
        for field in ("best_assignment", "final_flip_costs", "moves", "aspirated", "cost_trace"):
            np.testing.assert_array_equal(getattr(a, field), getattr(b, field))
        assert a.best_cost == b.best_cost


class TestRandomAssignment:
    def test_deterministic(self):
        np.testing.assert_array_equal(random_assignment(4, 9), random_assignment(4, 9))

    def test_binary(self):
        x = random_assignment(1000, 0)
        assert x.shape == (1000,) and set(np.unique(x)) <= {0, 1}

    @pytest.mark.parametrize("seed", [0, 1, 2, 12345])
    def test_mean(self, seed):
        assert 0.45 <= random_assignment(10_000, seed).mean() <= 0.55

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            random_assignment(0)
