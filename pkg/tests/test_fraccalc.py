import math

import numpy as np
import pytest

from rough_reflect.grid import Grid, GridPath, TwoParamField
from rough_reflect.fraccalc import (FracParams, SampledFunction, default_alpha,
                                    rl_integral, weyl_left, weyl_right,
                                    compensated_weyl, extended_tensor_derivative,
                                    rough_integral, rough_integral_cumulative,
                                    estimate_phi, estimate_phi3)
from rough_reflect.tensor import smooth_tensor

G = math.gamma


def unit(n):
    g = Grid(1.0, 1.0, n)
    return g, g.index_of(0.0), np.linspace(0.0, 1.0, n + 1)


class TestFracParams:
    def test_admissible_window(self):
        FracParams(0.65, 0.4, 1.0)
        with pytest.raises(ValueError):
            FracParams(0.55, 0.4, 1.0)   # below 1 - beta
        with pytest.raises(ValueError):
            FracParams(0.75, 0.4, 1.0)   # above (gamma beta + 1)/2 = 0.7
        with pytest.raises(ValueError):
            FracParams(0.65, 0.55, 1.0)  # beta outside (1/3, 1/2)
        with pytest.raises(ValueError):
            FracParams(0.65, 0.4, 0.3)   # gamma <= 1/beta - 2

    def test_default_alpha_is_midpoint(self):
        a = default_alpha(0.4, 1.0)
        assert a == pytest.approx(0.5 * (0.6 + 0.7))
        FracParams(a, 0.4, 1.0)


class TestRlIntegral:
    def test_constant(self):
        g, i0, t = unit(512)
        out = rl_integral(SampledFunction(g, np.ones(513), i0), 0.4).values
        assert np.max(np.abs(out - t ** 0.4 / G(1.4))) <= 1e-12

    def test_order_one_is_plain_integral(self):
        g, i0, t = unit(512)
        out = rl_integral(SampledFunction(g, t.copy(), i0), 1.0).values
        assert np.max(np.abs(out - t ** 2 / 2)) <= 1e-14

    def test_power_law(self):
        g, i0, t = unit(4096)
        out = rl_integral(SampledFunction(g, t ** 0.7, i0), 0.4).values
        exact = G(1.7) / G(2.1) * t ** 1.1
        assert np.max(np.abs(out - exact)[64:]) <= 1e-6

    def test_right_side_order_one(self):
        g, i0, t = unit(256)
        out = rl_integral(SampledFunction(g, t.copy(), i0), 1.0, side="right").values
        exact = (1.0 - t ** 2) / 2
        assert np.max(np.abs(out - exact)) <= 1e-14

    def test_bad_order(self):
        g, i0, t = unit(16)
        with pytest.raises(ValueError):
            rl_integral(SampledFunction(g, t, i0), 1.5)


class TestWeyl:
    def test_constant(self):
        g, i0, t = unit(1024)
        out = weyl_left(SampledFunction(g, np.full(1025, 2.5), i0), 0.55).values
        exact = 2.5 / (G(0.45) * t[1:] ** 0.55)
        assert np.max(np.abs(out - exact)) <= 1e-12

    def test_power_law(self):
        g, i0, t = unit(4096)
        out = weyl_left(SampledFunction(g, t ** 0.8, i0), 0.55).values
        exact = G(1.8) / G(1.25) * t[1:] ** 0.25
        assert np.max(np.abs(out - exact)[64:]) <= 1e-4

    def test_right_of_shifted_constant_vanishes(self):
        g, i0, t = unit(256)
        out = weyl_right(SampledFunction(g, np.zeros(257), i0), 0.55).values
        assert np.max(np.abs(out)) == 0.0

    def test_right_mirrors_left(self):
        g, i0, t = unit(256)
        f = np.sin(2 * t)
        left = weyl_left(SampledFunction(g, f.copy(), i0), 0.5).values
        right = weyl_right(SampledFunction(g, f[::-1].copy(), i0), 0.5).values
        assert np.max(np.abs(left - right[::-1])) <= 1e-12

    def test_inversion(self):
        g, i0, t = unit(4096)
        f = np.sin(3 * t)
        I = rl_integral(SampledFunction(g, f, i0), 0.45)
        D = weyl_left(I, 0.45)
        assert np.max(np.abs(D.values - f[1:])) <= 1e-3

    def test_anchor_excluded(self):
        g, i0, t = unit(64)
        out = weyl_left(SampledFunction(g, t.copy(), i0), 0.5)
        assert out.lo == i0 + 1


class TestCompensated:
    def test_affine_map_reduces_to_boundary(self):
        g, i0, t = unit(512)
        x = GridPath(g, np.sin(2 * t), i0)
        out = compensated_weyl(lambda u: np.array([[3.0 * u[0] + 1.0]]),
                               lambda u: np.array([[[3.0]]]), x, 0.5)
        exact = (3.0 * np.sin(2 * t[1:]) + 1.0) / (G(0.5) * t[1:] ** 0.5)
        assert np.max(np.abs(out.values[:, 0, 0] - exact)) <= 1e-12

    def test_constant_path(self):
        g, i0, t = unit(256)
        x = GridPath(g, np.full(257, 0.7), i0)
        out = compensated_weyl(lambda u: np.array([[math.cos(u[0])]]),
                               lambda u: np.array([[[-math.sin(u[0])]]]), x, 0.6)
        exact = math.cos(0.7) / (G(0.4) * t[1:] ** 0.6)
        assert np.max(np.abs(out.values[:, 0, 0] - exact)) <= 1e-12

    def test_square_closed_form(self):
        # f(u) = u^2, x(t) = t: the compensated increment is (r - theta)^2
        g, i0, t = unit(8192)
        x = GridPath(g, t.copy(), i0)
        out = compensated_weyl(lambda u: np.array([[u[0] ** 2]]),
                               lambda u: np.array([[[2.0 * u[0]]]]), x, 0.5)
        exact = (4.0 / 3.0) * t[1:] ** 1.5 / math.sqrt(math.pi)
        assert np.max(np.abs(out.values[:, 0, 0] - exact)) <= 1e-6


class TestExtendedTensorDerivative:
    def test_zero_field(self):
        g, i0, t = unit(64)
        fld = TwoParamField(g, np.zeros((65, 65, 1, 1)), i0)
        out = extended_tensor_derivative(fld, 0.7)
        assert np.max(np.abs(out.values)) == 0.0

    def test_linear_field_closed_form(self):
        g, i0, t = unit(512)
        lag = np.maximum(t[None, :] - t[:, None], 0.0)
        fld = TwoParamField(g, lag[:, :, None, None], i0)
        out = extended_tensor_derivative(fld, 0.7).values[:, 0, 0]
        exact = (1.0 - t) ** 0.7 / G(1.7)
        assert np.max(np.abs(out[:-1] - exact[:-1])) <= 1e-12

    def test_power_field_against_refined_quadrature(self):
        al = 0.7

        def at(n):
            g = Grid(1.0, 1.0, n)
            tt = np.linspace(0, 1, n + 1)
            lag = np.maximum(tt[None, :] - tt[:, None], 0.0)
            fld = TwoParamField(g, (lag ** 0.8)[:, :, None, None], g.index_of(0.0))
            return extended_tensor_derivative(fld, al).values[:, 0, 0], tt

        coarse, tc = at(256)
        fine, tf = at(4096)
        exact = lambda rr: (1 - rr) ** (0.8 + al - 1) * 0.8 / ((0.8 + al - 1) * G(al))
        err_c = np.abs(coarse[:-1] - exact(tc)[:-1]).max()
        err_f = np.abs(fine[:-1] - exact(tf)[:-1]).max()
        # converges at rate h^{2 beta + alpha - 1} = h^{1/2}
        assert err_f <= err_c / 3.0
        assert np.abs(coarse[:-1] - fine[::16][:-1]).max() <= 2 * err_c


def scalar_fn(f):
    return lambda u: np.array([[f(u[0])]])


def scalar_grad(fp):
    return lambda u: np.array([[[fp(u[0])]]])


class TestRoughIntegral:
    def setup_method(self):
        self.n = 512
        self.g, self.i0, self.t = unit(self.n)

    def lift(self, x_fn, y_fn):
        x = GridPath(self.g, x_fn(self.t), self.i0)
        y = GridPath(self.g, y_fn(self.t), self.i0)
        return x, y, smooth_tensor(x, y)

    def test_constant_integrand(self):
        x, y, xy = self.lift(lambda t: t ** 2, np.sin)
        params = FracParams(0.65, 0.4, 1.0)
        v = rough_integral(scalar_fn(lambda u: 3.0), scalar_grad(lambda u: 0.0),
                           x, y, xy, params, 0.0, 1.0)
        assert v[0] == pytest.approx(3.0 * (math.sin(1.0) - 0.0), abs=1e-12)

    def test_y_dy(self):
        x, y, xy = self.lift(np.sin, np.sin)
        params = FracParams(0.65, 0.4, 1.0)
        v = rough_integral(scalar_fn(lambda u: u), scalar_grad(lambda u: 1.0),
                           x, y, xy, params, 0.0, 1.0)
        assert v[0] == pytest.approx(math.sin(1.0) ** 2 / 2, abs=1e-5)

    def test_sin_of_square_vs_stieltjes(self):
        n = 2048
        g = Grid(1.0, 1.0, n)
        i0 = g.index_of(0.0)
        t = np.linspace(0, 1, n + 1)
        x = GridPath(g, t ** 2, i0)
        y = GridPath(g, t.copy(), i0)
        xy = smooth_tensor(x, y)
        tf = np.linspace(0, 1, 16 * n + 1)
        oracle = np.sum(0.5 * (np.sin(tf[:-1] ** 2) + np.sin(tf[1:] ** 2)) * np.diff(tf))
        vals = []
        for al in (0.62, 0.65, 0.68):
            v = rough_integral(scalar_fn(math.sin), scalar_grad(math.cos),
                               x, y, xy, FracParams(al, 0.4, 1.0), 0.0, 1.0)
            vals.append(v[0])
            assert abs(v[0] - oracle) <= 1e-4, f"alpha={al}"
        assert max(vals) - min(vals) <= 1e-4

    def test_cumulative_matches_endpoint(self):
        x, y, xy = self.lift(np.cos, lambda t: t + 0.2 * np.sin(3 * t))
        params = FracParams(0.65, 0.4, 1.0)
        cum = rough_integral_cumulative(scalar_fn(math.exp), scalar_grad(math.exp),
                                        x, y, xy, params, 0.0, 1.0)
        end = rough_integral(scalar_fn(math.exp), scalar_grad(math.exp),
                             x, y, xy, params, 0.0, 1.0)
        assert cum[-1, 0] == end[0]
        assert cum[0, 0] == 0.0

    def test_linearity_in_f(self):
        x, y, xy = self.lift(np.sin, np.cos)
        params = FracParams(0.65, 0.4, 1.0)

        def run(f, fp):
            return rough_integral(scalar_fn(f), scalar_grad(fp), x, y, xy,
                                  params, 0.0, 1.0)[0]

        va = run(math.sin, math.cos)
        vb = run(lambda u: u ** 2, lambda u: 2 * u)
        vach = run(lambda u: 2.0 * math.sin(u) + 3.0 * u ** 2,
                   lambda u: 2.0 * math.cos(u) + 6.0 * u)
        assert vach == pytest.approx(2 * va + 3 * vb, abs=1e-12)

    def test_linearity_in_driver_pair(self):
        # scaling (y, xy) -> (c y, c xy) scales the integral by c
        x, y, xy = self.lift(np.sin, np.cos)
        params = FracParams(0.65, 0.4, 1.0)
        y2 = GridPath(self.g, 2.0 * y.values, y.lo)
        xy2 = TwoParamField(self.g, 2.0 * xy.values, xy.lo)
        va = rough_integral(scalar_fn(math.sin), scalar_grad(math.cos),
                            x, y, xy, params, 0.0, 1.0)[0]
        vb = rough_integral(scalar_fn(math.sin), scalar_grad(math.cos),
                            x, y2, xy2, params, 0.0, 1.0)[0]
        assert vb == pytest.approx(2 * va, rel=1e-12)

    def test_multidimensional_contracts_correctly(self):
        # d = 2, m = 2 case against a classical Stieltjes oracle
        n = 512
        g = Grid(1.0, 1.0, n)
        i0 = g.index_of(0.0)
        t = np.linspace(0, 1, n + 1)
        xv = np.stack([t ** 2, np.cos(t)], axis=1)
        yv = np.stack([np.sin(t), t], axis=1)
        x, y = GridPath(g, xv, i0), GridPath(g, yv, i0)
        xy = smooth_tensor(x, y)

        def f(u):
            return np.array([[math.sin(u[0]), u[1] ** 2],
                             [u[0] * u[1], math.cos(u[1])]])

        def fp(u):
            return np.array([[[math.cos(u[0]), 0.0], [0.0, 2 * u[1]]],
                             [[u[1], u[0]], [0.0, -math.sin(u[1])]]])

        v = rough_integral(f, fp, x, y, xy, FracParams(0.65, 0.4, 1.0), 0.0, 1.0)
        tf = np.linspace(0, 1, 16 * n + 1)
        xf = np.stack([tf ** 2, np.cos(tf)], axis=1)
        yf = np.stack([np.sin(tf), tf], axis=1)
        Ff = np.stack([f(u) for u in xf])
        oracle = np.einsum("kqm,km->q", 0.5 * (Ff[:-1] + Ff[1:]), np.diff(yf, axis=0))
        assert np.max(np.abs(v - oracle)) <= 2e-4


class TestPhi:
    def test_zero(self):
        g, i0, t = unit(64)
        p = GridPath(g, np.zeros(65), i0)
        fld = TwoParamField(g, np.zeros((65, 65, 1, 1)), i0)
        assert estimate_phi(p, p, fld, 0.4, 0.0, 1.0) == 0.0

    def test_linear_paths(self):
        g, i0, t = unit(256)
        p = GridPath(g, t.copy(), i0)
        lift = smooth_tensor(p, p)
        phi = estimate_phi(p, p, lift, 0.4, 0.0, 1.0)
        assert phi == pytest.approx(1.5, rel=1e-12)

    def test_phi3_duplicate(self):
        g, i0, t = unit(256)
        p = GridPath(g, t.copy(), i0)
        lift = smooth_tensor(p, p)
        phi3 = estimate_phi3(p, p, p, lift, lift, 0.4, 0.0, 1.0)
        # ||x|| ||y||^2 + ||y|| ||x(x)y|| + ||x|| ||y(x)y|| = 1 + 0.5 + 0.5
        assert phi3 == pytest.approx(2.0, rel=1e-12)
