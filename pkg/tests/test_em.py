import numpy as np
import pytest

from bernmix import (
    BernsteinMixture,
    EmConfig,
    GroupedSample,
    RawSample,
    SimplexWeights,
    basis_matrix,
    em_grouped,
    em_raw,
    group,
    loglik_grouped,
    loglik_raw,
)
from bernmix.em import em_step_grouped, em_step_raw
from bernmix.model import cell_basis_matrix


def simplex_grid_best(loglik_fn, step=0.01, refine=0.001):
    """Brute-force maximum of a degree-2 loglik over the simplex."""

    def scan(p0s, p1_lo_hi=None):
        best = (-np.inf, None)
        for p0 in p0s:
            lo, hi = (0.0, 1.0 - p0) if p1_lo_hi is None else p1_lo_hi
            hi = min(hi, 1.0 - p0)
            for p1 in np.arange(lo, hi + 1e-12, step_local):
                p2 = 1.0 - p0 - p1
                if p2 < -1e-12:
                    continue
                ll = loglik_fn(np.array([p0, p1, max(p2, 0.0)]))
                if ll > best[0]:
                    best = (ll, (p0, p1))
        return best

    step_local = step
    best = scan(np.arange(0.0, 1.0 + 1e-12, step))
    p0c, p1c = best[1]
    step_local = refine
    fine = scan(
        np.arange(max(0.0, p0c - step), min(1.0, p0c + step) + 1e-12, refine),
        (max(0.0, p1c - step), p1c + step),
    )
    return max(best[0], fine[0])


class TestEmRaw:
    def test_degree_zero(self):
        rep = em_raw(RawSample(np.array([0.2, 0.8])), 0)
        np.testing.assert_allclose(rep.weights.p, [1.0])
        assert rep.loglik == 0.0
        assert rep.iterations == 1
        assert rep.converged

    def test_flat_point_keeps_uniform_init(self):
        # both degree-1 basis densities equal 1 at t = 0.5
        rep = em_raw(RawSample(np.array([0.5])), 1)
        np.testing.assert_allclose(rep.weights.p, [0.5, 0.5])
        assert rep.loglik == pytest.approx(0.0, abs=1e-14)

    def test_matches_simplex_grid_search(self):
        rng = np.random.default_rng(42)
        x = rng.beta(2, 2, size=50)
        data = RawSample(x)
        rep = em_raw(data, 2, EmConfig(tol=1e-11))
        b = basis_matrix(2, data.unit_values())
        best = simplex_grid_best(lambda p: float(np.log(b @ p + 1e-300).sum()))
        assert rep.loglik == pytest.approx(best, abs=1e-3)

    def test_loglik_field_matches_function(self):
        rng = np.random.default_rng(1)
        data = RawSample(rng.uniform(size=40))
        rep = em_raw(data, 5)
        assert rep.loglik == pytest.approx(loglik_raw(rep.weights, data), abs=1e-9)


class TestEmGrouped:
    def test_degree_zero(self):
        g = GroupedSample([0.0, 0.5, 1.0], [3, 4])
        rep = em_grouped(g, (0, 1), 0)
        np.testing.assert_allclose(rep.weights.p, [1.0])
        assert rep.iterations == 1

    def test_symmetric_counts_give_symmetric_weights(self):
        g = GroupedSample(np.linspace(0, 1, 5), [6, 6, 6, 6])
        rep = em_grouped(g, (0, 1), 1)
        assert abs(rep.weights.p[0] - rep.weights.p[1]) < 1e-6

    def test_matches_simplex_grid_search(self):
        g = GroupedSample(np.linspace(0, 1, 6), [10, 25, 30, 25, 10])
        rep = em_grouped(g, (0, 1), 2, EmConfig(tol=1e-11))
        a_mat = cell_basis_matrix(2, g.breakpoints)
        counts = g.counts.astype(float)
        best = simplex_grid_best(
            lambda p: float(counts @ np.log(a_mat @ p + 1e-300))
        )
        assert rep.loglik == pytest.approx(best, abs=1e-3)

    def test_loglik_field_matches_function(self):
        g = GroupedSample(np.linspace(0, 1, 8), [2, 9, 14, 11, 7, 4, 1])
        rep = em_grouped(g, (0, 1), 4)
        assert rep.loglik == pytest.approx(
            loglik_grouped(rep.weights, g, (0, 1)), abs=1e-9
        )

    def test_shifted_support(self):
        g = GroupedSample(np.linspace(-2, 2, 9), [1, 4, 9, 14, 15, 8, 5, 2])
        rep = em_grouped(g, (-2.0, 2.0), 3)
        assert rep.converged
        assert np.isfinite(rep.loglik)


class TestEmProperties:
    def test_monotone_ascent_and_simplex(self):
        rng = np.random.default_rng(77)
        for i in range(25):
            m = int(rng.integers(0, 16))
            n = int(rng.integers(20, 501))
            truth = SimplexWeights(rng.dirichlet(np.ones(m + 1)))
            x = BernsteinMixture(truth).sample(n, seed=100 + i)
            data = RawSample(x)
            if i % 2:
                rep = em_raw(data, m, EmConfig(max_iter=3000))
            else:
                g = group(data, int(rng.integers(5, 31)))
                rep = em_grouped(g, (0, 1), m, EmConfig(max_iter=3000))
            assert np.all(np.diff(rep.loglik_trace) >= -1e-10)
            assert np.all(rep.weights.p >= 0.0)
            assert abs(rep.weights.p.sum() - 1.0) < 1e-12

    def test_unique_maximum_across_inits(self):
        rng = np.random.default_rng(5)
        x = rng.beta(3, 2, size=150)
        data = RawSample(x)
        finals = []
        for _ in range(10):
            init = SimplexWeights(rng.dirichlet(np.ones(5)) * 0.9 + 0.02)
            rep = em_raw(data, 4, EmConfig(tol=1e-12, init=init))
            finals.append(rep.loglik)
        assert max(finals) - min(finals) < 1e-6

    def test_fixed_point_residual(self):
        rng = np.random.default_rng(6)
        data = RawSample(rng.beta(2, 5, size=200))
        rep = em_raw(data, 6, EmConfig(tol=1e-11))
        b = basis_matrix(6, data.unit_values())
        p = np.maximum(rep.weights.p, 1e-300)
        p_next, ll_here = em_step_raw(p, b)
        _, ll_next = em_step_raw(p_next, b)
        assert abs(ll_next - ll_here) < 1e-8
        assert rep.residual < 1e-6

    def test_stopping_rule_config(self):
        with pytest.raises(ValueError):
            EmConfig(tol=0.0)
        with pytest.raises(ValueError):
            EmConfig(max_iter=0)
        with pytest.raises(ValueError):
            EmConfig(init=SimplexWeights(np.array([1.0, 0.0])))

    def test_max_iter_reached_flags_not_converged(self):
        rng = np.random.default_rng(9)
        data = RawSample(rng.beta(2, 2, size=300))
        rep = em_raw(data, 10, EmConfig(tol=1e-14, max_iter=5))
        assert not rep.converged
        assert rep.iterations == 5

    def test_grouped_empty_cells_are_skipped(self):
        g = GroupedSample(np.linspace(0, 1, 11), [0, 0, 12, 30, 18, 0, 0, 0, 0, 0])
        rep = em_grouped(g, (0, 1), 3)
        assert rep.converged
        assert np.isfinite(rep.loglik)
