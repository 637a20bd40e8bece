import math

import numpy as np
import pytest

from rough_reflect.grid import Grid, GridPath, holder_norm, holder_norm_2param
from rough_reflect.fbm import (FbmSpec, FbmSample, covariance, sample_fbm,
                               stratonovich_tensor, tensor_moment_diagnostic)
from rough_reflect.tensor import MultiplicativeFunctional, check_multiplicative


class TestCovariance:
    def test_variance_at_one(self):
        assert covariance(0.4, 1.0, 1.0) == pytest.approx(1.0)
        assert covariance(0.37, 2.0, 2.0) == pytest.approx(2.0 ** 0.74)

    def test_pinned_at_origin(self):
        assert covariance(0.4, 0.7, 0.0) == 0.0

    def test_brownian_reduction(self):
        assert covariance(0.5, 0.3, 0.9) == pytest.approx(0.3)
        assert covariance(0.5, 1.2, 0.4) == pytest.approx(0.4)

    def test_negative_times_rejected(self):
        with pytest.raises(ValueError):
            covariance(0.4, -0.1, 0.5)


class TestSampler:
    def test_pinned_and_deterministic(self):
        g = Grid(0.5, 1.0, 32)
        spec = FbmSpec(0.4, 2, g, 77, refinement=4)
        s1 = sample_fbm(spec)
        s2 = sample_fbm(spec)
        assert np.array_equal(s1.fine.values, s2.fine.values)
        assert np.all(s1.coarse.at_time(0.0) == 0.0)
        assert np.array_equal(s1.coarse.values, s1.fine.values[::4])

    def test_components_independent_of_order(self):
        # component streams are keyed, so dims=1 and dims=3 agree on comp 0
        g = Grid(0.5, 0.5, 16)
        a = sample_fbm(FbmSpec(0.45, 1, g, 5, refinement=1)).coarse.values[:, 0]
        b = sample_fbm(FbmSpec(0.45, 3, g, 5, refinement=1)).coarse.values[:, 0]
        assert np.array_equal(a, b)

    def test_replications_differ(self):
        g = Grid(0.5, 0.5, 16)
        spec = FbmSpec(0.45, 1, g, 5, refinement=1)
        a = sample_fbm(spec, replication=0).coarse.values
        b = sample_fbm(spec, replication=1).coarse.values
        assert not np.array_equal(a, b)

    def test_methods_both_exact(self):
        # empirical second moment of W(1) close to 1 for both samplers
        g = Grid(1.0, 1.0, 16)
        for method in ("cholesky", "circulant"):
            spec = FbmSpec(0.4, 1, g, 11, refinement=1, method=method)
            vals = np.array([sample_fbm(spec, replication=r).coarse.at_time(1.0)[0]
                             for r in range(4000)])
            m2 = np.mean(vals ** 2)
            se = np.std(vals ** 2, ddof=1) / math.sqrt(len(vals))
            assert abs(m2 - 1.0) <= 3 * se, method

    def test_increment_variance_scaling(self):
        g = Grid(1.0, 1.0, 32)
        H = 0.45
        spec = FbmSpec(H, 1, g, 13, refinement=1)
        vals = np.array([sample_fbm(spec, replication=r).coarse.values[:, 0]
                         for r in range(3000)])
        i0 = g.index_of(0.0)
        inc = vals[:, g.index_of(0.75)] - vals[:, g.index_of(0.25)]
        m2 = np.mean(inc ** 2)
        se = np.std(inc ** 2, ddof=1) / math.sqrt(len(inc))
        assert abs(m2 - 0.5 ** (2 * H)) <= 3 * se

    def test_holder_regularity_finite(self):
        g = Grid(0.5, 1.0, 64)
        s = sample_fbm(FbmSpec(0.45, 1, g, 3, refinement=1))
        rep = holder_norm(s.coarse, 0.4, 0.0, 1.0)
        assert np.isfinite(rep.norm) and rep.norm > 0

    def test_spec_validation(self):
        g = Grid(0.5, 0.5, 8)
        with pytest.raises(ValueError):
            FbmSpec(0.6, 1, g, 0)
        with pytest.raises(ValueError):
            FbmSpec(0.4, 0, g, 0)
        with pytest.raises(ValueError):
            FbmSpec(0.4, 1, g, 0, refinement=0)


class TestStratonovichTensor:
    def test_constant_component_gives_zero(self):
        # a degenerate deterministic sample with one frozen component
        g = Grid(0.5, 1.0, 16)
        fine_g = Grid(0.5, 1.0, 64)
        tf = fine_g.times()
        fine = np.stack([np.full_like(tf, 0.7), np.sin(tf)], axis=1)
        sample = FbmSample(
            coarse=GridPath(g, fine[::4].copy(), 0),
            fine=GridPath(fine_g, fine, 0),
            spec=FbmSpec(0.45, 2, g, 0, refinement=4),
        )
        fld = stratonovich_tensor(sample)
        # exact in exact arithmetic; cumulative sums leave rounding dust
        assert np.max(np.abs(fld.values[:, :, 0, :])) <= 1e-15

    def test_smooth_surrogate_closed_form(self):
        r = math.pi / 4
        g = Grid(r, 2 * r, 32)
        fine_g = Grid(r, 2 * r, 32 * 16)
        tf = fine_g.times()
        tc = g.times()
        fine = np.stack([np.sin(tf), np.cos(tf)], axis=1)
        sample = FbmSample(
            coarse=GridPath(g, np.stack([np.sin(tc), np.cos(tc)], axis=1), 0),
            fine=GridPath(fine_g, fine, 0),
            spec=FbmSpec(0.45, 2, g, 0, refinement=16),
        )
        fld = stratonovich_tensor(sample)
        # component (0, 1): int_s^t (sin(v-r) - sin(s-r)) d cos(v)
        a, b = fld.t_lo + 5 * g.step, fld.t_lo + 29 * g.step
        sf = np.linspace(a, b, 40001)
        integrand = (np.sin(sf - r) - np.sin(a - r)) * (-np.sin(sf))
        exact = np.sum(0.5 * (integrand[:-1] + integrand[1:]) * np.diff(sf))
        got = fld.value(a, b)[0, 1]
        assert got == pytest.approx(exact, abs=1e-5)

    def test_diagonal_no_delay_exact(self):
        g = Grid(0.25, 0.5, 16)
        s = sample_fbm(FbmSpec(0.45, 1, g, 9, refinement=4))
        fld = stratonovich_tensor(s, delay=0.0)
        v = s.coarse.values[:, 0]
        for a in range(0, fld.values.shape[0], 3):
            for b in range(a + 1, fld.values.shape[0], 5):
                exact = 0.5 * (v[fld.lo + b] - v[fld.lo + a]) ** 2
                assert fld.values[a, b, 0, 0] == pytest.approx(exact, abs=1e-14)

    def test_chen_identity_to_rounding(self):
        g = Grid(0.5, 1.5, 24)
        s = sample_fbm(FbmSpec(0.42, 2, g, 21, refinement=4))
        fld = stratonovich_tensor(s)
        N = g.n_per_window
        Wsh = GridPath(g, s.coarse.values[: g.n_points - N].copy(), N)
        rep = check_multiplicative(
            MultiplicativeFunctional(Wsh, s.coarse, fld, 0.4), mode="full")
        assert rep.max_residual <= 1e-13

    def test_two_beta_norm_finite(self):
        g = Grid(0.5, 1.0, 32)
        s = sample_fbm(FbmSpec(0.45, 2, g, 2, refinement=2))
        fld = stratonovich_tensor(s)
        assert np.isfinite(holder_norm_2param(fld, 0.8).norm)

    def test_refinement_convergence(self):
        # tensor values converge as the quadrature mesh refines
        g = Grid(0.5, 1.0, 16)
        vals = {}
        for K in (2, 4, 8, 16, 32):
            s = sample_fbm(FbmSpec(0.45, 2, g, 6, refinement=K))
            vals[K] = stratonovich_tensor(s).values
        diffs = [float(np.max(np.abs(vals[a] - vals[b])))
                 for a, b in ((2, 4), (4, 8), (8, 16), (16, 32))]
        assert diffs[-1] < diffs[0]
        assert all(np.isfinite(d) for d in diffs)


class TestMomentDiagnostic:
    def test_zero_lag_moment_is_zero_and_small_sample_warns(self):
        with pytest.warns(UserWarning):
            rep = tensor_moment_diagnostic(0.45, 2.0, 200, lags=[0.25, 0.5],
                                           n_per_window=16, refinement=2, seed=3)
        assert np.isfinite(rep.slope)

    def test_brownian_baseline(self):
        # H = 1/2, no delay, i != j: classical Levy-area scaling, slope ~ 2
        rep = tensor_moment_diagnostic(0.5, 2.0, 3000, lags=[0.125, 0.25, 0.5, 1.0],
                                       delay=0.0, n_per_window=32, refinement=4,
                                       seed=17)
        assert abs(rep.slope - 2.0) <= 0.2

    def test_fbm_slope_one_sided(self):
        rep = tensor_moment_diagnostic(0.4, 2.0, 3000, lags=[0.125, 0.25, 0.5, 1.0],
                                       n_per_window=32, refinement=4, seed=19)
        assert rep.expected_slope == pytest.approx(1.6)
        assert rep.passed(0.2)

    def test_bad_p_rejected(self):
        with pytest.raises(ValueError):
            tensor_moment_diagnostic(0.4, 0.5, 100, lags=[0.5])
