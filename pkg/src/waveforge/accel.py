"""Optional numba acceleration for the dense inner loops.

Two loops dominate when grids get large: summing eigenmode contributions
over many evaluation points, and the Poisson-kernel convolution of a
sampled periodic function.  Both have a pure-numpy implementation; the
numba versions are compiled lazily on first use.

Selection is controlled by the WAVEFORGE_ACCEL environment variable:

* ``auto`` (default): numba if importable, numpy otherwise,
* ``numba``: require numba, raise if missing,
* ``numpy``: force the fallback.
"""

from __future__ import annotations

import math
import os

import numpy as np

__all__ = ["backend_name", "mode_synthesis", "poisson_convolve"]

try:
    from numba import njit, prange

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    _HAVE_NUMBA = False


def _selected() -> str:
    choice = os.environ.get("WAVEFORGE_ACCEL", "auto").strip().lower()
    if choice not in ("auto", "numba", "numpy"):
        raise ValueError(
            f"WAVEFORGE_ACCEL must be auto, numba or numpy, got '{choice}'"
        )
    if choice == "numba" and not _HAVE_NUMBA:
        raise RuntimeError("WAVEFORGE_ACCEL=numba but numba is not installed")
    if choice == "auto":
        return "numba" if _HAVE_NUMBA else "numpy"
    return choice


def backend_name() -> str:
    """Backend that calls will actually use right now."""
    return _selected()


# ---------------------------------------------------------------------------
# numpy reference implementations


def _mode_synthesis_np(points, freqs, norms, amps):
    # product over axes of sin(points . freq) for every (point, mode) pair
    phases = points[:, None, :] * freqs[None, :, :]
    values = np.sin(phases).prod(axis=2)
    return values @ (norms * amps)


def _poisson_convolve_np(samples, xi, l, xs, z):
    r = math.exp(z)
    kernel_num = 1.0 - r * r
    out = np.empty(xs.shape)
    for i, x in enumerate(xs):
        kern = kernel_num / (
            1.0 - 2.0 * r * np.cos(math.pi * (x - xi) / l) + r * r
        )
        # trapezoid over the periodic window [-l, l]
        out[i] = np.trapezoid(samples * kern, xi) / (2.0 * l)
    return out


# ---------------------------------------------------------------------------
# numba implementations (compiled on first call)

if _HAVE_NUMBA:

    @njit(cache=True, parallel=True)
    def _mode_synthesis_nb(points, freqs, norms, amps):  # pragma: no cover
        n_pts, d = points.shape
        n_modes = freqs.shape[0]
        out = np.zeros(n_pts)
        for p in prange(n_pts):
            acc = 0.0
            for m in range(n_modes):
                term = norms[m] * amps[m]
                for i in range(d):
                    term *= math.sin(points[p, i] * freqs[m, i])
                acc += term
            out[p] = acc
        return out

    @njit(cache=True, parallel=True)
    def _poisson_convolve_nb(samples, xi, l, xs, z):  # pragma: no cover
        r = math.exp(z)
        kernel_num = 1.0 - r * r
        n = xi.size
        out = np.empty(xs.size)
        for q in prange(xs.size):
            acc = 0.0
            for i in range(n):
                kern = kernel_num / (
                    1.0 - 2.0 * r * math.cos(math.pi * (xs[q] - xi[i]) / l)
                    + r * r
                )
                w = 0.5 if (i == 0 or i == n - 1) else 1.0
                acc += w * samples[i] * kern * (xi[1] - xi[0])
            out[q] = acc / (2.0 * l)
        return out


def mode_synthesis(points: np.ndarray, freqs: np.ndarray, norms: np.ndarray,
                   amps: np.ndarray) -> np.ndarray:
    """Sum_k norm_k amp_k prod_i sin(freq_ki x_i) at each point.

    ``points`` is (P, d), ``freqs`` (M, d) holds k_i pi / L_i, ``norms``
    and ``amps`` are (M,).
    """
    points = np.ascontiguousarray(points, dtype=float)
    freqs = np.ascontiguousarray(freqs, dtype=float)
    norms = np.ascontiguousarray(norms, dtype=float)
    amps = np.ascontiguousarray(amps, dtype=float)
    if _selected() == "numba":
        return _mode_synthesis_nb(points, freqs, norms, amps)
    return _mode_synthesis_np(points, freqs, norms, amps)


def poisson_convolve(samples: np.ndarray, l: float, xs: np.ndarray,
                     z: float) -> np.ndarray:
    """Poisson-kernel smoothing of uniformly sampled data on [-l, l].

    ``samples`` are function values on a uniform closed grid over [-l, l]
    (endpoints included); returns the convolution at each x in ``xs``.
    """
    samples = np.ascontiguousarray(samples, dtype=float)
    xs = np.ascontiguousarray(np.atleast_1d(xs), dtype=float)
    xi = np.linspace(-l, l, samples.size)
    if _selected() == "numba":
        return _poisson_convolve_nb(samples, xi, float(l), xs, float(z))
    return _poisson_convolve_np(samples, xi, float(l), xs, float(z))
