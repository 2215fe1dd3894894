"""Gauss rules, hypersphere surface means, and the sinh-kernel realization.

The sinh kernel is the workhorse of every wave-type solver here: in odd
dimension n = 2*nu + 3 it reduces to spherical means of the field over a
sphere of radius a*t, composed with nu iterated radial integrals and a short
polynomial residual.  All rules are immutable value objects and all
operations are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Callable, Sequence

import numpy as np
from scipy.special import roots_chebyu, roots_jacobi

from .errors import InvalidInterval, InvalidOrder, UnsupportedDimension
from .expr import Expr, compile_field, laplacian

__all__ = [
    "GaussRule",
    "SphereRule",
    "QuadratureSpec",
    "gauss_legendre",
    "sphere_rule",
    "spherical_mean",
    "iterated_time_integral",
    "sinh_kernel_apply",
    "SinhKernel",
    "double_factorial",
]


def double_factorial(k: int) -> float:
    """k!! with the degenerate values 0!! = (-1)!! = 1."""
    if k <= 0:
        return 1.0
    result = 1.0
    while k > 0:
        result *= k
        k -= 2
    return result


@dataclass(frozen=True)
class GaussRule:
    nodes: np.ndarray
    weights: np.ndarray
    interval: tuple[float, float]

    def integrate(self, values: np.ndarray) -> float:
        return float(np.dot(self.weights, values))


@dataclass(frozen=True)
class SphereRule:
    """Unit-sphere directions with mean-normalized weights (sum to 1)."""

    n: int
    directions: np.ndarray  # shape (count, n), unit vectors
    weights: np.ndarray  # shape (count,), sums to 1


@dataclass(frozen=True)
class QuadratureSpec:
    """Node counts for the solver pipelines."""

    n_time: int = 32
    n_radial: int = 32
    sphere_degree: int = 16

    def __post_init__(self):
        for name in ("n_time", "n_radial", "sphere_degree"):
            if getattr(self, name) < 2:
                raise InvalidOrder(f"{name} must be at least 2")


def gauss_legendre(count: int, a: float, b: float) -> GaussRule:
    """Gauss-Legendre rule with ``count`` nodes mapped to (a, b)."""
    if count < 1:
        raise InvalidOrder("node count must be positive")
    if a >= b:
        raise InvalidInterval(f"need a < b, got ({a}, {b})")
    nodes, weights = np.polynomial.legendre.leggauss(count)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    return GaussRule(mid + half * nodes, half * weights, (a, b))


_SPHERE_CACHE: dict[tuple[int, int], SphereRule] = {}


def sphere_rule(n: int, degree: int) -> SphereRule:
    """Product quadrature for surface means over the unit sphere in R^n.

    n=3 uses Gauss-Legendre in cos(theta) times a uniform azimuth grid;
    n=5 uses Gauss rules matched to the sin^k surface weights of the
    (theta1, theta2, theta3, phi) parametrization.
    """
    if degree < 2:
        raise InvalidOrder("degree must be at least 2")
    key = (n, degree)
    cached = _SPHERE_CACHE.get(key)
    if cached is not None:
        return cached

    if n == 3:
        u, wu = np.polynomial.legendre.leggauss(degree)
        phi = np.arange(2 * degree) * (np.pi / degree)
        s = np.sqrt(1.0 - u**2)
        dirs = np.empty((degree, 2 * degree, 3))
        dirs[:, :, 0] = u[:, None]
        dirs[:, :, 1] = s[:, None] * np.cos(phi)[None, :]
        dirs[:, :, 2] = s[:, None] * np.sin(phi)[None, :]
        w = np.broadcast_to(
            wu[:, None] / (wu.sum() * 2 * degree), (degree, 2 * degree)
        )
        rule = SphereRule(3, dirs.reshape(-1, 3), w.reshape(-1).copy())
    elif n == 5:
        # surface element sin^3(t1) sin^2(t2) sin(t3) dt1 dt2 dt3 dphi;
        # substituting u = cos(t) turns the three polar weights into
        # (1-u^2), sqrt(1-u^2) and 1.
        u1, w1 = roots_jacobi(degree, 1.0, 1.0)
        u2, w2 = roots_chebyu(degree)
        u3, w3 = np.polynomial.legendre.leggauss(degree)
        phi = np.arange(2 * degree) * (np.pi / degree)
        s1 = np.sqrt(np.clip(1.0 - u1**2, 0.0, None))
        s2 = np.sqrt(np.clip(1.0 - u2**2, 0.0, None))
        s3 = np.sqrt(np.clip(1.0 - u3**2, 0.0, None))
        shape = (degree, degree, degree, 2 * degree)
        dirs = np.empty(shape + (5,))
        dirs[..., 0] = u1[:, None, None, None]
        dirs[..., 1] = (s1[:, None] * u2[None, :])[:, :, None, None]
        dirs[..., 2] = (s1[:, None, None] * s2[None, :, None] * u3[None, None, :])[
            :, :, :, None
        ]
        tail = s1[:, None, None] * s2[None, :, None] * s3[None, None, :]
        dirs[..., 3] = tail[:, :, :, None] * np.cos(phi)
        dirs[..., 4] = tail[:, :, :, None] * np.sin(phi)
        w = (
            w1[:, None, None, None]
            * w2[None, :, None, None]
            * w3[None, None, :, None]
            * np.ones(2 * degree)
        )
        w /= w.sum()
        rule = SphereRule(5, dirs.reshape(-1, 5), w.reshape(-1))
    else:
        raise UnsupportedDimension(f"sphere rules exist for n in {{3, 5}}, not {n}")

    _SPHERE_CACHE[key] = rule
    return rule


def _as_field(field) -> Callable:
    if isinstance(field, Expr):
        return compile_field(field)
    return field


def spherical_mean(field, center: Sequence[float], radius: float,
                   rule: SphereRule) -> float:
    """Mean of ``field`` over the sphere of given radius around ``center``.

    ``field`` may be an :class:`Expr` or a compiled callable ``f(X)``.
    Radius 0 short-circuits to point evaluation.
    """
    f = _as_field(field)
    center = np.asarray(center, dtype=float)
    if radius == 0.0:
        return float(f(center[None, :])[0])
    points = center[None, :] + radius * rule.directions
    return float(np.dot(rule.weights, f(points)))


def iterated_time_integral(g: Callable[[np.ndarray], np.ndarray], m: int,
                           t: float, rule_count: int = 32) -> float:
    """m-fold iterated integral (int_0^t . tau dtau)^m of g, collapsed.

    The m-fold nesting collapses to a single weighted integral
    int_0^t (t^2 - tau^2)^{m-1}/(2m-2)!! g(tau) tau dtau; for m = 1 this
    is the plain single integral.
    """
    if m < 1:
        raise InvalidOrder(f"fold count must be >= 1, got {m}")
    if t == 0.0:
        return 0.0
    nodes, weights = np.polynomial.legendre.leggauss(rule_count)
    tau = 0.5 * t * (nodes + 1.0)
    w = 0.5 * t * weights
    values = np.asarray(g(tau), dtype=float)
    if m == 1:
        integrand = values * tau
    else:
        integrand = (t**2 - tau**2) ** (m - 1) / double_factorial(2 * m - 2) \
            * values * tau
    return float(np.dot(w, integrand))


class SinhKernel:
    """Evaluator of sinh(a t Lap^(1/2)) / (a Lap^(1/2)) applied to a field.

    Precompiles the field (and, for n = 5, its Laplacian) so repeated
    applications at many times are vectorized numpy reductions.
    """

    def __init__(self, field: Expr, a: float, spec: QuadratureSpec | None = None):
        spec = spec or QuadratureSpec()
        n = field.ndim
        if n not in (3, 5):
            raise UnsupportedDimension(
                f"sinh kernel implemented for n in {{3, 5}}, not {n}"
            )
        self.n = n
        self.nu = (n - 3) // 2
        self.a = float(a)
        self.spec = spec
        self.rule = sphere_rule(n, spec.sphere_degree)
        self._f = compile_field(field)
        self._lap = compile_field(laplacian(field)) if self.nu >= 1 else None

    def _means(self, x: np.ndarray, radii: np.ndarray, f: Callable,
               t_args=None) -> np.ndarray:
        """Spherical means of f around x at each radius (vectorized).

        ``t_args`` optionally supplies a time parameter per radius, for
        fields that carry an explicit t dependence.
        """
        radii = np.asarray(radii, dtype=float)
        points = x[None, None, :] + radii[:, None, None] * self.rule.directions
        if t_args is None:
            values = f(points)
        else:
            values = f(points, np.asarray(t_args, dtype=float)[:, None])
        return values @ self.rule.weights

    def apply(self, x: Sequence[float], t: float) -> float:
        return float(self.apply_many(x, np.asarray([t]))[0])

    def apply_many(self, x: Sequence[float], ts: np.ndarray,
                   t_args=None) -> np.ndarray:
        """Kernel applied at each time in ``ts`` (may include 0).

        ``t_args``, if given, is an array aligned with ``ts`` holding the
        parameter passed to the field as its explicit time argument.
        """
        x = np.asarray(x, dtype=float)
        ts = np.asarray(ts, dtype=float)
        out = np.zeros_like(ts)
        live = ts != 0.0
        if not np.any(live):
            return out
        tlive = ts[live]
        plive = None if t_args is None else np.asarray(t_args, dtype=float)[live]
        if self.nu == 0:
            means = self._means(x, self.a * tlive, self._f, plive)
            out[live] = tlive * means
            return out
        # n = 5: one radial fold over the Laplacian's spherical mean,
        # then the t*f(x) residual term.
        n_r = self.spec.n_radial
        nodes, weights = np.polynomial.legendre.leggauss(n_r)
        # radial nodes for every t at once: tau[i, j] in (0, t_i)
        tau = 0.5 * tlive[:, None] * (nodes[None, :] + 1.0)
        w = 0.5 * tlive[:, None] * weights[None, :]
        inner_t = None
        if plive is not None:
            inner_t = np.broadcast_to(plive[:, None], tau.shape).reshape(-1)
        # the surface normalizer 2(2pi)^(nu+1)(a t)^(n-1) exceeds the true
        # sphere area by (n-2)!!, so rescale the plain mean accordingly
        means = self._means(x, (self.a * tau).reshape(-1), self._lap, inner_t)
        means = means.reshape(tau.shape) / double_factorial(self.n - 2)
        radial = np.sum(w * (self.a**2) * means * tau, axis=1)
        if plive is None:
            f_at_x = self._f(x[None, :])[0]
        else:
            f_at_x = self._f(
                np.broadcast_to(x, (tlive.size, self.n)), plive
            )
        out[live] = tlive * radial + tlive * f_at_x
        return out


def sinh_kernel_apply(field: Expr, a: float, t: float, x: Sequence[float],
                      spec: QuadratureSpec | None = None) -> float:
    """One-shot form of :class:`SinhKernel` for a single (x, t)."""
    return SinhKernel(field, a, spec).apply(x, t)
