"""Command-line front end.

Subcommands::

    waveforge solve <config>        evaluate a problem on a grid, write CSV
    waveforge verify <suite>        run a verification suite (or 'all')
    waveforge sum-series ...        Abel-Poisson sum of a Fourier series

Exit codes: 0 success, 1 verification failure, 2 configuration or usage
error, 3 evaluation failure.
"""

from __future__ import annotations

import argparse
import itertools
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .config import ProblemConfig, dump_config, load_config
from .errors import ConfigError, WaveforgeError
from .expr import parse
from .heat_solver import solve_heat_product
from .ibvp import build_basis, solve_ibvp
from .opcalc import FourierSeriesSpec, abel_poisson_sum
from .verify import SUITES, run_suite
from .wave_solver import solve_wave

__all__ = ["main", "build_evaluator"]

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_EVAL = 3


def _format(v: float) -> str:
    """Scientific notation with 17 significant digits."""
    return f"{v:.16e}"


def _thread_count(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("WAVEFORGE_THREADS", "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"WAVEFORGE_THREADS must be an integer, got '{env}'")
    return 1


def build_evaluator(cfg: ProblemConfig):
    """Construct the solver the config asks for."""
    if cfg.box is not None:
        basis = build_basis(cfg.box, cfg.k_max)
        return solve_ibvp(cfg.problem, basis, cfg.quadrature)
    if cfg.problem.kind == "heat-product":
        return solve_heat_product(cfg.problem, cfg.quadrature, cfg.heat)
    return solve_wave(cfg.problem, cfg.quadrature)


def _cmd_solve(args) -> int:
    try:
        cfg = load_config(args.config)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.dump_config:
        sys.stdout.write(dump_config(cfg))
        return EXIT_OK
    try:
        threads = _thread_count(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        ev = build_evaluator(cfg)
        axis_points = [ax.points() for ax in cfg.axes]
        t_points = cfg.t_axis.points()
        rows = list(itertools.product(*axis_points, t_points))

        def value(row):
            *x, t = row
            return ev(np.asarray(x), t)

        if threads == 1:
            values = [value(r) for r in rows]
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                values = list(pool.map(value, rows))
    except WaveforgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EVAL

    n = cfg.problem.n
    header = ",".join([f"x{i + 1}" for i in range(n)] + ["t", "u"])
    with open(cfg.output_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for row, v in zip(rows, values):
            fh.write(",".join(_format(c) for c in row) + "," + _format(v) + "\n")
    return EXIT_OK


def _cmd_verify(args) -> int:
    if args.suite != "all" and args.suite not in SUITES:
        names = ", ".join(sorted(SUITES) + ["all"])
        print(f"error: unknown suite '{args.suite}' (choose from {names})",
              file=sys.stderr)
        return EXIT_CONFIG
    results = run_suite(args.suite)
    for res in results:
        print(res.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_OK if not failed else EXIT_VERIFY_FAILED


def _cmd_sum_series(args) -> int:
    if args.z >= 0:
        print("error: z must be negative", file=sys.stderr)
        return EXIT_CONFIG
    try:
        gens = {}
        if args.generator:
            gens["s_plus"] = parse(args.generator, 1)
        if args.sine_generator:
            gens["s_minus"] = parse(args.sine_generator, 1)
        if not gens:
            print("error: need --generator or --sine-generator", file=sys.stderr)
            return EXIT_CONFIG
        spec = FourierSeriesSpec(args.half_period, **gens)
    except WaveforgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        lo, hi, count = args.x_range.split(":")
        xs = np.linspace(float(lo), float(hi), int(count))
    except ValueError:
        print("error: --x-range must be lo:hi:count", file=sys.stderr)
        return EXIT_CONFIG
    try:
        values = [abel_poisson_sum(spec, float(x), args.z) for x in xs]
    except WaveforgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EVAL
    out = sys.stdout
    close = False
    if args.output:
        out = open(args.output, "w", encoding="utf-8", newline="\n")
        close = True
    try:
        out.write("x,f_z\n")
        for x, v in zip(xs, values):
            out.write(f"{_format(float(x))},{_format(v)}\n")
    finally:
        if close:
            out.close()
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="waveforge",
        description="Closed-form wave and heat equation evaluation",
    )
    parser.add_argument(
        "--threads", type=int, default=None,
        help="grid evaluation threads (default: WAVEFORGE_THREADS or 1)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="evaluate a problem config on a grid")
    p_solve.add_argument("config", help="path to an INI problem config")
    p_solve.add_argument(
        "--dump-config", action="store_true",
        help="echo the parsed config in canonical form and exit",
    )
    p_solve.set_defaults(fn=_cmd_solve)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("suite", help="modes|residual|heat|ibvp|opcalc|all")
    p_verify.set_defaults(fn=_cmd_verify)

    p_sum = sub.add_parser("sum-series", help="Abel-Poisson Fourier summation")
    p_sum.add_argument("--generator", help="cosine-channel generator S(t)")
    p_sum.add_argument("--sine-generator", help="sine-channel generator")
    p_sum.add_argument("--half-period", type=float, default=1.0)
    p_sum.add_argument("--x-range", default="-1:1:101", help="lo:hi:count")
    p_sum.add_argument("--z", type=float, required=True, help="negative radius log")
    p_sum.add_argument("--output", help="CSV path (default stdout)")
    p_sum.set_defaults(fn=_cmd_sum_series)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
