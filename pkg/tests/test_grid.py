import numpy as np
import pytest

from rough_reflect.grid import (Grid, GridPath, TwoParamField, holder_norm,
                                holder_norm_2param, weighted_sup_norm, shift_path,
                                write_path_csv, read_path_csv, write_field_csv,
                                read_field_csv, GridAlignmentError)
from rough_reflect.tensor import smooth_tensor


def unit_grid(n=128, horizon=1.0):
    return Grid(1.0, horizon, n)


def path_from(grid, fn, dim=1):
    t = grid.times()
    vals = fn(t)
    if vals.ndim == 1:
        vals = vals[:, None]
    return GridPath(grid, vals, 0)


class TestGrid:
    def test_step_divides_delay(self):
        g = Grid(0.5, 1.5, 64)
        assert g.step * g.n_per_window == pytest.approx(0.5, abs=1e-15)
        assert g.n_windows == 3

    def test_partial_tail_window(self):
        g = Grid(1.0, 1.5, 64)
        assert g.n_windows == 2
        lo, hi = g.window_bounds(1)
        assert hi - lo == 32

    def test_misaligned_horizon_rejected(self):
        with pytest.raises(GridAlignmentError):
            Grid(1.0, 1.0001, 64)

    def test_index_of_delay_shift_is_exact(self):
        g = Grid(0.3, 0.9, 50)
        for t in (0.0, 0.3, 0.6, 0.9):
            i = g.index_of(t)
            assert g.index_of(t - 0.3) == i - 50


class TestHolderNorm:
    def test_constant_path_zero(self):
        g = unit_grid()
        p = path_from(g, lambda t: np.full_like(t, 3.7))
        assert holder_norm(p, 0.4).norm == 0.0

    def test_linear_path_exponent_one(self):
        g = unit_grid()
        p = path_from(g, lambda t: t)
        rep = holder_norm(p, 1.0, 0.0, 1.0)
        assert rep.norm == pytest.approx(1.0, abs=1e-12)

    def test_sqrt_path_half_exponent(self):
        # brute-force oracle over all pairs confirms sup = 1 at (0, h)
        g = unit_grid(256)
        t = g.times()
        p = GridPath(g, np.sqrt(np.maximum(t, 0.0)), 0)
        rep = holder_norm(p, 0.5, 0.0, 1.0)
        i0 = g.index_of(0.0)
        vals = p.values[i0:, 0]
        tv = t[i0:]
        brute = max(abs(vals[j] - vals[i]) / (tv[j] - tv[i]) ** 0.5
                    for i in range(len(tv)) for j in range(i + 1, len(tv)))
        assert rep.norm == pytest.approx(brute, rel=1e-12)
        assert rep.norm == pytest.approx(1.0, abs=1e-12)
        assert rep.witness_pair == pytest.approx((0.0, g.step))

    def test_monotone_in_interval(self):
        g = unit_grid()
        rng = np.random.default_rng(3)
        p = GridPath(g, np.cumsum(rng.standard_normal(g.n_points)), 0)
        big = holder_norm(p, 0.4, -1.0, 1.0).norm
        small = holder_norm(p, 0.4, -0.5, 0.5).norm
        assert small <= big + 1e-15

    def test_bounds_oscillation(self):
        # ||x||_beta (t-s)^beta dominates sup |x - x(s)| on the grid
        g = unit_grid()
        rng = np.random.default_rng(4)
        p = GridPath(g, np.cumsum(rng.standard_normal(g.n_points)) * 0.1, 0)
        s, t = 0.25, 0.75
        rep = holder_norm(p, 0.4, s, t)
        i, j = g.index_of(s), g.index_of(t)
        osc = np.max(np.abs(p.values[i:j + 1] - p.values[i]))
        assert osc <= rep.norm * (t - s) ** 0.4 + 1e-12

    def test_errors(self):
        g = unit_grid()
        p = path_from(g, lambda t: t)
        with pytest.raises(ValueError):
            holder_norm(p, 0.4, 0.5, 0.5)
        with pytest.raises(GridAlignmentError):
            holder_norm(p, 0.4, 0.0, 2.5)


class TestHolder2Param:
    def test_zero_field(self):
        g = unit_grid(64)
        f = TwoParamField(g, np.zeros((g.n_points, g.n_points, 1, 1)), 0)
        assert holder_norm_2param(f, 0.8).norm == 0.0

    def test_power_field_ratio_one(self):
        g = unit_grid(64)
        t = g.times()
        lag = np.maximum(t[None, :] - t[:, None], 0.0)
        f = TwoParamField(g, (lag ** 0.8)[:, :, None, None], 0)
        rep = holder_norm_2param(f, 0.8)
        assert rep.norm == pytest.approx(1.0, rel=1e-12)

    def test_smooth_tensor_of_linear_paths(self):
        # (x(x)y)_{u,v} = (v-u)^2/2 for x = y = t, so the 2 beta norm at
        # beta = 0.4 is max (v-u)^{1.2} / 2 = 0.5 at the full interval
        g = unit_grid(64)
        t = g.times()
        i0 = g.index_of(0.0)
        p = GridPath(g, t[i0:].copy(), i0)
        lift = smooth_tensor(p, p)
        rep = holder_norm_2param(lift, 0.8)
        brute = 0.0
        n1 = lift.values.shape[0]
        for i in range(n1):
            for j in range(i + 1, n1):
                brute = max(brute, abs(lift.values[i, j, 0, 0])
                            / ((j - i) * g.step) ** 0.8)
        assert rep.norm == pytest.approx(brute, rel=1e-12)
        assert rep.norm == pytest.approx(0.5, rel=1e-12)
        assert rep.witness_pair == pytest.approx((0.0, 1.0))


class TestWeightedSup:
    def test_zero(self):
        g = unit_grid()
        assert weighted_sup_norm(path_from(g, lambda t: 0 * t), 1.0) == 0.0

    def test_constant_weight_monotone(self):
        g = unit_grid()
        p = path_from(g, lambda t: np.ones_like(t))
        # sup of e^{-t} over [0, 1] is at t = 0
        assert weighted_sup_norm(p, 1.0, 0.0, 1.0) == pytest.approx(1.0, abs=1e-15)

    def test_exact_cancellation(self):
        g = unit_grid()
        lam = 2.0
        t = g.times()
        p = GridPath(g, np.exp(lam * t), 0)
        v = weighted_sup_norm(p, lam, 0.0, 1.0)
        assert v == pytest.approx(1.0, abs=1e-12)

    def test_lambda_below_one_rejected(self):
        g = unit_grid()
        with pytest.raises(ValueError):
            weighted_sup_norm(path_from(g, lambda t: t), 0.5)

    def test_norm_equivalence_factor(self):
        # || . ||_{lam'} and || . ||_{lam} differ by at most
        # e^{(lam'-lam) max(|a|,|b|)}
        g = unit_grid()
        rng = np.random.default_rng(5)
        p = GridPath(g, rng.standard_normal((g.n_points, 2)), 0)
        a, b = -1.0, 1.0
        n1 = weighted_sup_norm(p, 1.0, a, b)
        n2 = weighted_sup_norm(p, 3.0, a, b)
        factor = np.exp((3.0 - 1.0) * max(abs(a), abs(b)))
        assert n2 <= n1 * factor + 1e-12
        assert n1 <= n2 * factor + 1e-12


class TestShift:
    def test_zero_shift_identity(self):
        g = unit_grid()
        p = path_from(g, lambda t: np.sin(t))
        q = shift_path(p, 0.0)
        assert np.array_equal(q.values, p.values) and q.lo == p.lo

    def test_linear_shift(self):
        g = unit_grid()
        p = path_from(g, lambda t: t)
        q = shift_path(p, 1.0)
        for t in (0.0, 0.5, 1.0):
            assert q.at_time(t)[0] == pytest.approx(t - 1.0, abs=1e-12)

    def test_composition(self):
        g = Grid(0.5, 1.5, 32)
        p = path_from(g, lambda t: np.cos(3 * t))
        q1 = shift_path(shift_path(p, 0.5), 0.5)
        q2 = shift_path(p, 1.0)
        n = min(len(q1.values), len(q2.values))
        assert np.array_equal(q1.values[:n], q2.values[:n])
        assert q1.lo == q2.lo

    def test_shift_identity_for_holder_norm(self):
        g = unit_grid()
        p = path_from(g, lambda t: np.sin(5 * t))
        q = shift_path(p, 1.0)
        a = holder_norm(q, 0.4, 0.25, 1.0).norm
        b = holder_norm(p, 0.4, -0.75, 0.0).norm
        assert a == pytest.approx(b, rel=1e-14)

    def test_misaligned_shift_rejected(self):
        g = unit_grid()
        with pytest.raises(GridAlignmentError):
            shift_path(path_from(g, lambda t: t), 0.1234567)


class TestCsvRoundTrip:
    def test_path(self, tmp_path):
        g = unit_grid(37)
        rng = np.random.default_rng(6)
        p = GridPath(g, rng.standard_normal((g.n_points, 3)), 0)
        f = tmp_path / "p.csv"
        write_path_csv(p, f)
        q = read_path_csv(f, g)
        assert np.array_equal(p.values, q.values) and p.lo == q.lo

    def test_field(self, tmp_path):
        g = unit_grid(16)
        rng = np.random.default_rng(7)
        vals = np.zeros((20, 20, 2, 1))
        iu = np.triu_indices(20, 1)
        vals[iu] = rng.standard_normal((len(iu[0]), 2, 1))
        fld = TwoParamField(g, vals, 5)
        f = tmp_path / "f.csv"
        write_field_csv(fld, f)
        back = read_field_csv(f, g, (2, 1))
        assert back.lo == fld.lo
        assert np.array_equal(back.values, fld.values)
