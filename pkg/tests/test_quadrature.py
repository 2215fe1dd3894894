"""Gauss rules, sphere means, iterated integrals, and the sinh kernel."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from waveforge.errors import InvalidInterval, InvalidOrder, UnsupportedDimension
from waveforge.expr import parse
from waveforge.quadrature import (
    QuadratureSpec,
    SinhKernel,
    double_factorial,
    gauss_legendre,
    iterated_time_integral,
    sinh_kernel_apply,
    sphere_rule,
    spherical_mean,
)


class TestDoubleFactorial:
    def test_values(self):
        assert double_factorial(0) == 1.0
        assert double_factorial(-1) == 1.0
        assert double_factorial(5) == 15.0
        assert double_factorial(6) == 48.0


class TestGaussLegendre:
    def test_polynomial_exactness(self):
        rule = gauss_legendre(8, 0.0, 2.0)
        # degree 15 polynomial integrated exactly
        vals = rule.nodes**15
        assert rule.integrate(vals) == pytest.approx(2.0**16 / 16, rel=1e-14)

    def test_interval_validation(self):
        with pytest.raises(InvalidInterval):
            gauss_legendre(4, 1.0, 1.0)

    def test_count_validation(self):
        with pytest.raises(InvalidOrder):
            gauss_legendre(0, 0.0, 1.0)


class TestSphereRules:
    @pytest.mark.parametrize("n", [3, 5])
    def test_weights_normalized(self, n):
        rule = sphere_rule(n, 8)
        assert rule.weights.sum() == pytest.approx(1.0, abs=1e-13)
        assert np.allclose((rule.directions**2).sum(axis=1), 1.0)

    @pytest.mark.parametrize("n", [3, 5])
    def test_coordinate_moments(self, n):
        # mean of xi_i^2 over the unit sphere is 1/n; odd moments vanish
        rule = sphere_rule(n, 10)
        for i in range(n):
            m2 = np.dot(rule.weights, rule.directions[:, i] ** 2)
            assert m2 == pytest.approx(1.0 / n, abs=1e-12)
            m1 = np.dot(rule.weights, rule.directions[:, i])
            assert abs(m1) < 1e-12

    def test_unsupported_dimension(self):
        with pytest.raises(UnsupportedDimension):
            sphere_rule(4, 8)

    def test_mean_of_exponential_n3(self):
        # mean of e^{x1} over radius-r sphere is sinh(r)/r
        rule = sphere_rule(3, 16)
        r = 1.3
        got = spherical_mean(parse("exp(x1)", 3), [0, 0, 0], r, rule)
        assert got == pytest.approx(math.sinh(r) / r, rel=1e-12)

    def test_mean_of_plane_wave_n5(self):
        # mean of sin(k.x) around x0: multiplies by the radial symbol
        rule = sphere_rule(5, 12)
        e = parse("sin(x1 + 2*x2)", 5)
        x0 = np.array([0.4, -0.1, 0.2, 0.0, 0.3])
        r = 0.9
        kr = math.sqrt(5.0) * r
        # radial factor for n=5: 3 (sin s / s^3 - cos s / s^2)
        factor = 3.0 * (math.sin(kr) / kr**3 - math.cos(kr) / kr**2)
        exact = factor * math.sin(x0[0] + 2 * x0[1])
        got = spherical_mean(e, x0, r, rule)
        assert got == pytest.approx(exact, rel=1e-10)

    def test_zero_radius(self):
        rule = sphere_rule(3, 4)
        e = parse("x1^2 + 5", 3)
        assert spherical_mean(e, [2, 0, 0], 0.0, rule) == pytest.approx(9.0)


class TestIteratedTimeIntegral:
    def test_single_fold(self):
        got = iterated_time_integral(lambda t: np.ones_like(t), 1, 2.0)
        assert got == pytest.approx(2.0, rel=1e-13)

    def test_double_fold_of_one(self):
        # two folds of 1: t^4 / 8
        got = iterated_time_integral(lambda t: np.ones_like(t), 2, 1.0)
        assert got == pytest.approx(1.0 / 8.0, rel=1e-13)

    @pytest.mark.parametrize("m", [1, 2, 3])
    @pytest.mark.parametrize("p", [0, 1, 2, 3])
    def test_collapse_matches_nested(self, m, p):
        # the collapsed weight reproduces literal nesting for monomials
        t = 1.1

        def nested(g, folds, upper):
            if folds == 0:
                return g(upper)
            nodes, weights = np.polynomial.legendre.leggauss(48)
            tau = 0.5 * upper * (nodes + 1.0)
            w = 0.5 * upper * weights
            inner = np.array([nested(g, folds - 1, u) for u in tau])
            return float(np.dot(w, inner * tau))

        collapsed = iterated_time_integral(lambda tau: tau**p, m, t, 48)
        literal = nested(lambda tau: tau**p, m, t)
        assert collapsed == pytest.approx(literal, rel=1e-12, abs=1e-13)

    def test_fold_count_validation(self):
        with pytest.raises(InvalidOrder):
            iterated_time_integral(lambda t: t, 0, 1.0)


class TestSinhKernel:
    @pytest.mark.parametrize("n", [3, 5])
    @pytest.mark.parametrize("kvec", [(1.0, 0.0), (1.2, 0.9)])
    def test_symbol_on_plane_waves(self, n, kvec):
        # applying the kernel to sin(k.x) multiplies by sin(a|k|t)/(a|k|)
        a = 1.3
        k1, k2 = kvec
        e = parse(f"sin({k1}*x1 + {k2}*x2)", n)
        x = np.zeros(n)
        x[0], x[1] = 0.5, -0.3
        mag = math.hypot(k1, k2)
        spec = QuadratureSpec(sphere_degree=12)
        kern = SinhKernel(e, a, spec)
        for t in (0.4, 1.0):
            exact = (
                math.sin(a * mag * t) / (a * mag)
                * math.sin(k1 * x[0] + k2 * x[1])
            )
            assert kern.apply(x, t) == pytest.approx(exact, abs=5e-13)

    def test_zero_time(self):
        e = parse("exp(x1)", 3)
        assert sinh_kernel_apply(e, 1.0, 0.0, [0.3, 0, 0]) == 0.0

    def test_small_time_linear(self):
        # sinh(at sqrt(Lap))/(a sqrt(Lap)) f ~ t f as t -> 0
        e = parse("exp(-(x1^2+x2^2+x3^2))", 3)
        x = [0.2, 0.1, -0.3]
        t = 1e-6
        got = sinh_kernel_apply(e, 2.0, t, x)
        from waveforge.expr import eval_real

        assert got == pytest.approx(t * eval_real(e, x), rel=1e-9)

    def test_even_dimension_rejected(self):
        with pytest.raises(UnsupportedDimension):
            SinhKernel(parse("x1", 2), 1.0)

    def test_batched_matches_single(self):
        e = parse("sin(x1)*cos(x2)", 3)
        kern = SinhKernel(e, 1.1)
        x = np.array([0.3, 0.4, -0.2])
        ts = np.array([0.2, 0.0, 0.9])
        batch = kern.apply_many(x, ts)
        for i, t in enumerate(ts):
            assert batch[i] == pytest.approx(kern.apply(x, t), abs=1e-15)


class TestQuadratureSpec:
    def test_validation(self):
        with pytest.raises(InvalidOrder):
            QuadratureSpec(n_time=1)

    @given(st.integers(2, 40))
    @settings(max_examples=20, deadline=None)
    def test_gauss_weight_sum(self, count):
        rule = gauss_legendre(count, -1.0, 3.0)
        assert rule.weights.sum() == pytest.approx(4.0, rel=1e-13)
