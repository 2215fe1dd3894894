"""Compare the numba and numpy backends of the dense inner loops.

Run as: python3 benchmarks/bench_accel.py
"""

import math
import os
import time

import numpy as np


def timed(fn, repeats=5):
    fn()  # warm up (numba compiles here)
    best = math.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_mode_synthesis(backend):
    os.environ["WAVEFORGE_ACCEL"] = backend
    from waveforge import accel

    rng = np.random.default_rng(7)
    points = rng.uniform(0.0, math.pi, size=(4000, 2))
    modes = 32
    kk = np.stack(np.meshgrid(np.arange(1, modes + 1),
                              np.arange(1, modes + 1), indexing="ij"),
                  axis=-1).reshape(-1, 2).astype(float)
    norms = np.full(kk.shape[0], 2.0 / math.pi)
    amps = rng.normal(size=kk.shape[0])
    return timed(lambda: accel.mode_synthesis(points, kk, norms, amps))


def bench_poisson(backend):
    os.environ["WAVEFORGE_ACCEL"] = backend
    from waveforge import accel

    xs = np.linspace(-1.0, 1.0, 20001)
    samples = np.sign(np.cos(math.pi * xs))
    queries = np.linspace(-0.95, 0.95, 400)
    return timed(lambda: accel.poisson_convolve(samples, 1.0, queries, -0.05))


def main():
    print(f"{'benchmark':<24}{'numpy':>12}{'numba':>12}{'speedup':>10}")
    for name, fn in (
        ("mode_synthesis", bench_mode_synthesis),
        ("poisson_convolve", bench_poisson),
    ):
        t_np = fn("numpy")
        t_nb = fn("numba")
        print(f"{name:<24}{t_np:>11.4f}s{t_nb:>11.4f}s{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
