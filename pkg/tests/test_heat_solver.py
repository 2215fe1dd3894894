"""Diffusion semigroup and the heat-product solvers."""

import math

import numpy as np
import pytest

from waveforge.errors import (
    InvalidOrder,
    NegativeDiffusionTime,
    UnsupportedDimension,
)
from waveforge.expr import parse
from waveforge.heat_solver import (
    HeatPropagator,
    HeatPropagatorSpec,
    heat_propagate,
    solve_heat_product,
)
from waveforge.oracle import ModeProblem, heat_closed_form, mode_solve
from waveforge.problems import CauchyProblem


class TestPropagator:
    @pytest.mark.parametrize("k", [0.5, 1.0, 2.0])
    def test_mode_decay(self, k):
        # e^{lam Lap} sin(kx) = e^{-k^2 lam} sin(kx)
        e = parse(f"sin({k}*x1)", 1)
        lam = 0.4
        got = heat_propagate(e, lam, [0.3])
        exact = math.exp(-k * k * lam) * math.sin(k * 0.3)
        assert got == pytest.approx(exact, abs=1e-12)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_gaussian_closed_form(self, n):
        quad = "+".join(f"x{i + 1}^2" for i in range(n))
        e = parse(f"exp(-({quad})/4)", n)
        x = np.linspace(0.1, 0.5, n)
        got = heat_propagate(e, 0.7, x)
        assert got == pytest.approx(heat_closed_form(1.0, 0.7, x), abs=1e-10)

    def test_constant_preserved(self):
        assert heat_propagate(parse("3", 2), 1.5, [0.0, 0.0]) == pytest.approx(
            3.0, abs=1e-14
        )

    def test_zero_time_identity(self):
        e = parse("sin(x1)*x2", 2)
        assert heat_propagate(e, 0.0, [0.4, 2.0]) == pytest.approx(
            math.sin(0.4) * 2.0
        )

    def test_negative_time_rejected(self):
        with pytest.raises(NegativeDiffusionTime):
            heat_propagate(parse("x1", 1), -0.1, [0.0])

    def test_semigroup_property(self):
        # two short steps equal one long step on a Gaussian
        sigma, t1, t2 = 1.0, 0.3, 0.4
        x = [0.25]
        s1 = sigma + t1
        mid = parse(f"({sigma / s1})^0.5*exp(-x1^2/(4*{s1}))", 1)
        got = heat_propagate(mid, t2, x)
        assert got == pytest.approx(
            heat_closed_form(sigma, t1 + t2, x), abs=1e-10
        )

    def test_dimension_limit(self):
        with pytest.raises(UnsupportedDimension):
            HeatPropagator(parse("x1", 4))

    def test_spec_validation(self):
        with pytest.raises(InvalidOrder):
            HeatPropagatorSpec(c_trunc=2.0)
        with pytest.raises(InvalidOrder):
            HeatPropagatorSpec(n_nodes=8)


class TestEqualSpeeds:
    def test_single_factor_gaussian(self):
        g = parse("exp(-x1^2/4)", 1)
        p = CauchyProblem("heat-product", 1, 1, (1.0,), None, (g,))
        ev = solve_heat_product(p)
        for t in (0.0, 0.5, 1.0):
            assert ev([0.3], t) == pytest.approx(
                heat_closed_form(1.0, t, [0.3]), abs=1e-12
            )

    def test_two_factor_manufactured(self):
        # (1 + 2t) e^{-t} sin(x1) solves the squared single-speed problem
        p = CauchyProblem(
            "heat-product", 1, 2, (1.0, 1.0), None,
            (parse("sin(x1)", 1), parse("sin(x1)", 1)),
        )
        ev = solve_heat_product(p)
        for t in (0.0, 0.6, 1.2):
            exact = (1 + 2 * t) * math.exp(-t) * math.sin(0.4)
            assert ev([0.4], t) == pytest.approx(exact, abs=1e-12)

    def test_source_against_mode_oracle(self):
        p = CauchyProblem(
            "heat-product", 1, 2, (1.0, 1.0), parse("sin(x1)*cos(t)", 1),
            (None, None),
        )
        ev = solve_heat_product(p)
        mp = ModeProblem(
            "heat", (1.0, 1.0), (1.0,), (0.0, 0.0), source=parse("cos(t)", 0)
        )
        t = 0.9
        assert ev([0.4], t) == pytest.approx(
            mode_solve(mp, t) * math.sin(0.4), abs=1e-10
        )

    def test_speed_scales_decay(self):
        a = 2.5
        p = CauchyProblem(
            "heat-product", 1, 1, (a,), None, (parse("sin(x1)", 1),)
        )
        ev = solve_heat_product(p)
        t = 0.7
        assert ev([0.4], t) == pytest.approx(
            math.exp(-a * t) * math.sin(0.4), abs=1e-12
        )


class TestDistinctSpeeds:
    def test_two_factor_manufactured(self):
        # (e^{-t} - e^{-3t}) sin(x1) for speeds (1, 3)
        p = CauchyProblem(
            "heat-product", 1, 2, (1.0, 3.0), None,
            (None, parse("2*sin(x1)", 1)),
        )
        ev = solve_heat_product(p)
        for t in (0.0, 0.6, 1.5):
            exact = (math.exp(-t) - math.exp(-3 * t)) * math.sin(0.4)
            assert ev([0.4], t) == pytest.approx(exact, abs=1e-12)

    def test_three_factor_pure_mode(self):
        # data chosen so only the e^{-2t} branch is excited
        p = CauchyProblem(
            "heat-product", 1, 3, (1.0, 2.0, 4.0), None,
            (
                parse("sin(x1)", 1),
                parse("-2*sin(x1)", 1),
                parse("4*sin(x1)", 1),
            ),
        )
        ev = solve_heat_product(p)
        t = 0.5
        assert ev([0.4], t) == pytest.approx(
            math.exp(-2 * t) * math.sin(0.4), abs=1e-12
        )

    def test_source_against_mode_oracle(self):
        speeds = (1.0, 3.0)
        p = CauchyProblem(
            "heat-product", 1, 2, speeds, parse("sin(x1)*cos(t)", 1),
            (None, None),
        )
        ev = solve_heat_product(p)
        mp = ModeProblem(
            "heat", speeds, (1.0,), (0.0, 0.0), source=parse("cos(t)", 0)
        )
        t = 1.1
        assert ev([0.4], t) == pytest.approx(
            mode_solve(mp, t) * math.sin(0.4), abs=1e-10
        )

    def test_2d_mode(self):
        p = CauchyProblem(
            "heat-product", 2, 2, (1.0, 2.0), None,
            (parse("sin(x1)*sin(x2)", 2), parse("-2*sin(x1)*sin(x2)", 2)),
        )
        # lam = 2: factors decay at 2 and 4; data select e^{-2t}
        ev = solve_heat_product(p)
        t = 0.4
        exact = math.exp(-2 * t) * math.sin(0.3) * math.sin(0.8)
        assert ev([0.3, 0.8], t) == pytest.approx(exact, abs=1e-11)

    def test_mixed_speed_cluster_rejected(self):
        p = CauchyProblem(
            "heat-product", 1, 3, (1.0, 1.0, 2.0), None, (None,) * 3
        )
        with pytest.raises(InvalidOrder):
            solve_heat_product(p)
