import numpy as np
import pytest

from rough_reflect.grid import Grid, GridPath, TwoParamField
from rough_reflect.tensor import (MultiplicativeFunctional, smooth_tensor,
                                  check_multiplicative, shift_tensor,
                                  extend_delayed_tensor, two_beta_constant)
from rough_reflect.fraccalc import SampledFunction
from rough_reflect import solver as sv


def unit(n=64, horizon=1.0):
    g = Grid(1.0, horizon, n)
    return g, g.index_of(0.0), g.times()


class TestSmoothTensor:
    def test_constant_first_path(self):
        # vanishes in exact arithmetic; cumulative sums leave rounding dust
        g, i0, t = unit()
        x = GridPath(g, np.full(g.n_points, 2.0), 0)
        y = GridPath(g, np.sin(t), 0)
        lift = smooth_tensor(x, y)
        assert np.max(np.abs(lift.values)) <= 1e-14

    def test_linear_pair(self):
        g, i0, t = unit()
        p = GridPath(g, t.copy(), 0)
        lift = smooth_tensor(p, p)
        s_v, t_v = 0.25, 0.75
        got = lift.value(s_v, t_v)[0, 0]
        assert got == pytest.approx((t_v - s_v) ** 2 / 2, abs=1e-15)

    def test_quadratic_oracle_at_h2(self):
        g, i0, t = unit(256)
        x = GridPath(g, t ** 2, 0)
        y = GridPath(g, t.copy(), 0)
        lift = smooth_tensor(x, y)
        s_v, t_v = 0.25, 1.0
        exact = (t_v ** 3 - s_v ** 3) / 3 - s_v ** 2 * (t_v - s_v)
        got = lift.value(s_v, t_v)[0, 0]
        assert abs(got - exact) <= (t_v - s_v) * g.step ** 2 / 3

    def test_chen_identity_exact(self):
        g, i0, t = unit(48)
        rng = np.random.default_rng(8)
        x = GridPath(g, rng.standard_normal((g.n_points, 2)).cumsum(axis=0), 0)
        y = GridPath(g, rng.standard_normal((g.n_points, 3)).cumsum(axis=0), 0)
        lift = smooth_tensor(x, y)
        rep = check_multiplicative(MultiplicativeFunctional(x, y, lift, 0.4),
                                   mode="full")
        scale = np.max(np.abs(lift.values))
        assert rep.max_residual <= 1e-13 * max(scale, 1.0)


class TestCheckMultiplicative:
    def test_perturbation_found_with_witness(self):
        g, i0, t = unit(32)
        x = GridPath(g, np.sin(t), 0)
        y = GridPath(g, np.cos(t), 0)
        lift = smooth_tensor(x, y)
        lift.values[5, 20, 0, 0] += 1e-4
        rep = check_multiplicative(MultiplicativeFunctional(x, y, lift, 0.4),
                                   mode="full")
        assert rep.max_residual == pytest.approx(1e-4, rel=1e-6)
        w_idx = {g.index_of(w) for w in rep.witness}
        assert 5 in w_idx or 20 in w_idx

    def test_sampled_mode_deterministic(self):
        g, i0, t = unit(32)
        x = GridPath(g, np.sin(t), 0)
        y = GridPath(g, np.cos(t), 0)
        lift = smooth_tensor(x, y)
        F = MultiplicativeFunctional(x, y, lift, 0.4)
        r1 = check_multiplicative(F, mode="sampled", n_samples=500, seed=4)
        r2 = check_multiplicative(F, mode="sampled", n_samples=500, seed=4)
        assert r1 == r2


class TestShiftTensor:
    def test_zero_shift(self):
        g, i0, t = unit()
        p = GridPath(g, t.copy(), 0)
        lift = smooth_tensor(p, p)
        out = shift_tensor(MultiplicativeFunctional(p, p, lift, 0.4), 0.0)
        assert np.array_equal(out.values, lift.values) and out.lo == lift.lo

    def test_stationary_field_unchanged_in_lag(self):
        g, i0, t = unit(64, horizon=2.0)
        p = GridPath(g, t.copy(), 0)
        lift = smooth_tensor(p, p)
        out = shift_tensor(MultiplicativeFunctional(p, p, lift, 0.4), 1.0)
        # (t-s)^2/2 depends only on the lag, so shifted values coincide
        n = out.values.shape[0]
        assert np.allclose(out.values[: n - 5, : n - 5],
                           lift.values[: n - 5, : n - 5], atol=1e-15)

    def test_identity_preserved_and_constant_equal(self):
        g, i0, t = unit(48, horizon=2.0)
        x = GridPath(g, np.sin(2 * t), 0)
        y = GridPath(g, np.cos(t) + 0.3 * t, 0)
        lift = smooth_tensor(x, y)
        F = MultiplicativeFunctional(x, y, lift, 0.4)
        shifted = shift_tensor(F, 1.0)
        xs = GridPath(g, x.values[: g.n_points - g.n_per_window], g.n_per_window)
        ys = GridPath(g, y.values[: g.n_points - g.n_per_window], g.n_per_window)
        n_keep = shifted.values.shape[0]
        Fs = MultiplicativeFunctional(xs, ys, shifted, 0.4)
        rep = check_multiplicative(Fs, mode="full")
        assert rep.max_residual <= 1e-13
        c0 = two_beta_constant(MultiplicativeFunctional(
            x, y, TwoParamField(g, lift.values[:n_keep, :n_keep], lift.lo), 0.4))
        c1 = two_beta_constant(Fs)
        assert c1.norm == pytest.approx(c0.norm, rel=1e-14)


class TestTwoBetaConstant:
    def test_zero_field(self):
        g, i0, t = unit()
        fld = TwoParamField(g, np.zeros((g.n_points, g.n_points, 1, 1)), 0)
        p = GridPath(g, np.zeros(g.n_points), 0)
        assert two_beta_constant(MultiplicativeFunctional(p, p, fld, 0.4)).norm == 0.0

    def test_power_field_unit(self):
        g, i0, t = unit()
        lag = np.maximum(t[None, :] - t[:, None], 0.0)
        fld = TwoParamField(g, (lag ** 0.8)[:, :, None, None], 0)
        p = GridPath(g, np.zeros(g.n_points), 0)
        rep = two_beta_constant(MultiplicativeFunctional(p, p, fld, 0.4))
        assert rep.norm == pytest.approx(1.0, rel=1e-12)

    def test_linear_smooth_tensor(self):
        g, i0, t = unit()
        i0 = g.index_of(0.0)
        p = GridPath(g, t[i0:].copy(), i0)
        lift = smooth_tensor(p, p)
        rep = two_beta_constant(MultiplicativeFunctional(p, p, lift, 0.4))
        assert rep.norm == pytest.approx(0.5, rel=1e-12)
        assert rep.witness_pair == pytest.approx((0.0, 1.0))


class TestExtendDelayedTensor:
    def _solve_smooth(self, sigma, drift, eta_level=0.4, N=64):
        g = Grid(1.0, 2.0, N)
        i0 = g.index_of(0.0)
        t = g.times()
        eta = GridPath(g, np.full((N + 1, 1), eta_level), 0)
        y = GridPath(g, np.sin(t), 0)
        eta_shift = GridPath(g, eta.values.copy(), i0)
        et = smooth_tensor(eta_shift, y)
        y_shift = GridPath(g, y.values[: g.n_points - N].copy(), N)
        yy = smooth_tensor(y_shift, y)
        coefs = sv.Coefficients(sigma, drift, eta, 0.4, 1.0)
        sol = sv.solve(coefs, y, et, yy, sv.SolveConfig())
        return g, i0, coefs, y, et, yy, sol

    def test_zero_case(self):
        g, i0, coefs, y, et, yy, sol = self._solve_smooth(
            sv.sigma_zero(1, 1), sv.drift_zero(1))
        N = g.n_per_window
        drift_sf = SampledFunction(g, np.zeros((N + 1, 1)), i0 + N)
        zero_field = TwoParamField(g, np.zeros((N + 1, N + 1, 1, 1)), i0)
        ext = extend_delayed_tensor(sol.x, y, zero_field, yy, drift_sf, sol.z,
                                    0, coefs.sigma.fn)
        assert np.max(np.abs(ext.values)) == 0.0
        assert ext.lo == i0 and ext.hi == i0 + 2 * N

    def test_constant_sigma_matches_driver_field(self):
        g, i0, coefs, y, et, yy, sol = self._solve_smooth(
            sv.sigma_constant([[1.0]]), sv.drift_zero(1))
        N = g.n_per_window
        drift_sf = SampledFunction(g, np.zeros((N + 1, 1)), i0 + N)
        ext = extend_delayed_tensor(sol.x, y, sol.tensors[0], yy, drift_sf,
                                    sol.z, 0, coefs.sigma.fn)
        blk = ext.values[N:, N:]
        ref = yy.values[i0 + N - yy.lo :, i0 + N - yy.lo :]
        assert np.max(np.abs(blk - ref)) <= 1e-12

    def test_full_smooth_case_chen_and_bound(self):
        g, i0, coefs, y, et, yy, sol = self._solve_smooth(
            sv.sigma_linear(np.ones((1, 1, 1))), sv.drift_linear(0.0, 1, 0.1))
        N = g.n_per_window
        drift_sf = sv._drift_samples_for_block(coefs, sol.x.values, g, i0 + N, i0 + 2 * N)
        ext = extend_delayed_tensor(sol.x, y, sol.tensors[0], yy, drift_sf,
                                    sol.z, 0, coefs.sigma.fn)
        x_shift = GridPath(g, sol.x.values[: g.n_points - N], N)
        F = MultiplicativeFunctional(x_shift, y, ext, 0.4)
        rep = check_multiplicative(F, mode="full")
        assert rep.max_residual <= 1e-5
        fit = two_beta_constant(F)
        assert np.isfinite(fit.norm) and fit.norm > 0

    def test_cross_pairs_forced_by_chen(self):
        # the glued cross values must equal the Chen combination of the two
        # diagonal blocks for every (s, u=r, t) triple
        g, i0, coefs, y, et, yy, sol = self._solve_smooth(
            sv.sigma_linear(np.ones((1, 1, 1))), sv.drift_linear(0.0, 1, 0.1))
        N = g.n_per_window
        drift_sf = sv._drift_samples_for_block(coefs, sol.x.values, g, i0 + N, i0 + 2 * N)
        ext = extend_delayed_tensor(sol.x, y, sol.tensors[0], yy, drift_sf,
                                    sol.z, 0, coefs.sigma.fn)
        # x_{.-r} at local index k of the field is x at global index k (lo = i0 = N)
        worst = 0.0
        for si in range(0, N, 7):
            for ti in range(N + 1, 2 * N + 1, 9):
                du = sol.x.values[i0] - sol.x.values[si]
                dy = y.values[ext.lo + ti - y.lo] - y.values[ext.lo + N - y.lo]
                chen = ext.values[si, N] + ext.values[N, ti] + np.outer(du, dy)
                worst = max(worst, abs(ext.values[si, ti, 0, 0] - chen[0, 0]))
        assert worst <= 1e-12

    def test_missing_driver_field_rejected(self):
        g, i0, coefs, y, et, yy, sol = self._solve_smooth(
            sv.sigma_constant([[1.0]]), sv.drift_zero(1))
        N = g.n_per_window
        drift_sf = SampledFunction(g, np.zeros((N + 1, 1)), i0 + N)
        with pytest.raises(ValueError):
            extend_delayed_tensor(sol.x, y, sol.tensors[0], None, drift_sf,
                                  sol.z, 0, coefs.sigma.fn)
