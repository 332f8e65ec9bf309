import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from instances import random_orthogonal_instance, small_lasso_instances
from oracles import lasso_grid_rss, soft_threshold_fit_rss
from varsel.criteria import cp_known_sigma
from varsel.data_model import make_dataset, standardize
from varsel.errors import ConfigError, VarselError
from varsel.lars import (
    cp_drop,
    lars_path,
    lars_path_arrays,
    soft_threshold_rss,
    soft_threshold_rss_curve,
    sorted_squares,
    truncate_path,
)


class TestLarsPathExamples:
    def test_identity_two_by_two(self):
        p = lars_path_arrays(np.eye(2), np.array([3.0, 1.0]))
        np.testing.assert_allclose(p.rss, [10.0, 2.0, 0.0], atol=1e-12)
        assert [s.active_set for s in p.steps] == [(), (0,), (0, 1)]
        np.testing.assert_allclose(p.steps[1].coefficients, [2.0])
        # brute-force soft thresholding agrees at each breakpoint
        for q in range(3):
            assert p.rss[q] == pytest.approx(soft_threshold_fit_rss([3.0, 1.0], q), abs=1e-12)

    def test_no_signal_stops_at_null_model(self):
        X = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
        y = np.array([0.0, 0.0, 2.0])
        p = lars_path_arrays(X, y)
        assert len(p) == 1
        assert p.rss[0] == 4.0

    def test_single_spike_exact_after_one_step(self):
        y = np.zeros(6)
        y[3] = -2.5
        p = lars_path_arrays(np.eye(6), y)
        assert p.steps[1].active_set == (3,)
        assert p.rss[1] == pytest.approx(0.0, abs=1e-24)

    def test_standardized_dataset_starts_from_centered_tss(self, rng):
        d = make_dataset(rng.standard_normal(20) + 5, rng.standard_normal((20, 4)))
        sd = standardize(d)
        p = lars_path(sd)
        assert p.rss[0] == pytest.approx(((d.y - d.y.mean()) ** 2).sum())
        assert len(p) == 5

    def test_tie_enters_lowest_index(self):
        p = lars_path_arrays(np.eye(3), np.array([2.0, 2.0, 1.0]), max_steps=1)
        assert p.steps[1].active_set == (0,)

    def test_cap_is_enforced(self, rng):
        X = rng.standard_normal((5, 8))
        with pytest.raises(ConfigError):
            lars_path_arrays(X, rng.standard_normal(5), max_steps=6)
        sd = standardize(make_dataset(rng.standard_normal(5), X))
        with pytest.raises(ConfigError):
            lars_path(sd, 5)
        assert len(lars_path(sd, 4)) == 5

    def test_collinear_columns_stop_early(self, rng):
        x = rng.standard_normal(12)
        X = np.column_stack([x, rng.standard_normal(12), x])
        sd = standardize(make_dataset(2 * x + rng.standard_normal(12), X))
        p = lars_path(sd)
        assert p.stopped_early
        assert len(p) <= 3
        assert all(len(set(s.active_set)) == s.q for s in p.steps)

    def test_truncate_matches_capped_path(self, rng):
        sd = standardize(make_dataset(rng.standard_normal(30), rng.standard_normal((30, 10))))
        full = lars_path(sd)
        capped = lars_path(sd, 4)
        cut = truncate_path(full, 4)
        np.testing.assert_allclose(cut.rss, capped.rss, rtol=1e-12)
        assert cut.steps[-1].active_set == capped.steps[-1].active_set


class TestOrthogonalClosedForm:
    def test_identity_matches_formula(self):
        gen = np.random.default_rng(1)
        for _ in range(200):
            n = int(gen.integers(2, 51))
            y = gen.standard_normal(n) * gen.uniform(0.5, 3)
            p = lars_path_arrays(np.eye(n), y)
            v = sorted_squares(y)
            ref = np.array([soft_threshold_rss(v, q) for q in range(len(p))])
            np.testing.assert_allclose(p.rss, ref, rtol=1e-8, atol=1e-8 * (y @ y))

    def test_rotated_orthogonal_matches_formula(self):
        gen = np.random.default_rng(2)
        for _ in range(200):
            Q, z = random_orthogonal_instance(gen)
            p = lars_path_arrays(Q, Q @ z)
            assert len(p) == z.size + 1
            ref = soft_threshold_rss_curve(sorted_squares(z))
            np.testing.assert_allclose(p.rss, ref, rtol=1e-8, atol=1e-8 * (z @ z))


class TestSoftThresholdRss:
    def test_examples(self):
        v = (9.0, 4.0, 1.0)
        assert soft_threshold_rss(v, 0) == 14.0
        assert soft_threshold_rss(v, 1) == 9.0
        assert soft_threshold_rss(v, 2) == 3.0
        assert soft_threshold_rss(v, 3) == 0.0

    def test_matches_brute_force_soft_threshold(self):
        # y = (3, 2, 1) thresholded at |Y_(2)| = 2 leaves residuals (2, 2, 1)
        assert soft_threshold_fit_rss([3.0, 2.0, 1.0], 1) == 9.0
        gen = np.random.default_rng(3)
        for _ in range(100):
            y = gen.standard_normal(int(gen.integers(1, 30)))
            v = sorted_squares(y)
            for q in range(y.size + 1):
                assert soft_threshold_rss(v, q) == pytest.approx(soft_threshold_fit_rss(y, q), rel=1e-12, abs=1e-14)

    def test_curve_matches_pointwise(self, rng):
        v = sorted_squares(rng.standard_normal(17))
        curve = soft_threshold_rss_curve(v)
        np.testing.assert_allclose(curve, [soft_threshold_rss(v, q) for q in range(18)], rtol=1e-12)

    def test_rejects_unsorted(self):
        with pytest.raises(VarselError):
            soft_threshold_rss([1.0, 4.0, 9.0], 0)

    def test_rejects_q_out_of_range(self):
        with pytest.raises(VarselError):
            soft_threshold_rss([4.0, 1.0], 3)

    def test_ties_sorted_stably(self):
        v = sorted_squares([1.0, -2.0, 2.0, 0.5])
        np.testing.assert_array_equal(v, [4.0, 4.0, 1.0, 0.25])


class TestCpDrop:
    def test_examples(self):
        v = (9.0, 4.0, 1.0)
        assert cp_drop(v, 0) == 3.0
        assert cp_drop(v, 1) == 4.0
        # q = n - 1 uses Y2_(n+1) = 0
        assert cp_drop(v, 2) == 3 * 1.0 - 2

    def test_equal_magnitudes(self):
        v = (2.25,) * 5
        assert all(cp_drop(v, q) == -2.0 for q in range(4))

    def test_matches_cp_first_difference(self):
        v = (9.0, 4.0, 1.0)
        cp = cp_known_sigma([soft_threshold_rss(v, q) for q in range(4)], 3).values
        np.testing.assert_array_equal(cp, [11.0, 8.0, 4.0, 3.0])
        for q in range(3):
            assert cp_drop(v, q) == cp[q] - cp[q + 1]

    @given(st.lists(st.floats(0, 100), min_size=1, max_size=40))
    @settings(max_examples=200, deadline=None)
    def test_identity_on_random_inputs(self, values):
        v = np.sort(np.asarray(values))[::-1]
        n = v.size
        rss = [soft_threshold_rss(v, q) for q in range(n + 1)]
        cp = cp_known_sigma(rss, n).values
        for q in range(n):
            assert cp_drop(v, q) == pytest.approx(cp[q] - cp[q + 1], abs=1e-12 * max(1.0, v.sum()))


def test_rss_nonincreasing_general_position():
    gen = np.random.default_rng(4)
    for _ in range(500):
        X = gen.standard_normal((30, 10))
        y = X @ (gen.standard_normal(10) * gen.uniform(0, 2)) + gen.standard_normal(30)
        p = lars_path(standardize(make_dataset(y, X)))
        assert np.all(np.diff(p.rss) <= 1e-9 * p.rss[0])
        assert all(s.rss >= 0 for s in p.steps)
        assert all(np.all(np.isfinite(s.coefficients)) for s in p.steps)
        assert [s.q for s in p.steps] == list(range(len(p)))


def test_breakpoints_match_lasso_grid_search():
    for sd, p in small_lasso_instances(10, seed=5):
        for step in p.steps[1:]:
            t = np.abs(step.coefficients).sum()
            assert step.rss == pytest.approx(lasso_grid_rss(sd.X, sd.y, t), abs=1e-4)
