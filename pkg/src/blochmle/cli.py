"""Command-line surface.

Subcommands: ``estimate`` (counts file -> JSON report), ``simulate``
(synthetic counts file), ``bench`` (projection vs direct-search timing),
``trajectories`` (plot-ready projection curves), ``check`` (seeded
invariant suites).  Exit codes: 0 success, 1 failed invariant,
2 bad input, 3 internal numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import sys

import numpy as np

from .bench import DISCREPANCY_TOL, run_benchmark
from .checks import SUITES, run_suites
from .core import InvalidInputError, SolverError, norm_squared, weight_vector
from .io import (
    build_estimate_report,
    counts_to_csv,
    counts_to_json,
    parse_counts,
    report_to_json,
)
from .projector import projection_trajectory
from .simulator import SimulationSpec, simulate

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT = 2
EXIT_SOLVER = 3

PLANES = {"xi1xi2": (0, 1, 2), "xi1xi3": (0, 2, 1), "xi2xi3": (1, 2, 0)}


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from None


def _write_output(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _parse_triple(text: str, flag: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise InvalidInputError(f"{flag}: expected 3 comma-separated values, got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise InvalidInputError(f"{flag}: not numeric: {text!r}") from None


def _parse_weights(text: str, flag: str) -> np.ndarray:
    # accepts ratios (e.g. 5,1,1) and normalizes them to fractions
    ratios = np.asarray(_parse_triple(text, flag))
    if np.any(ratios <= 0.0) or not np.all(np.isfinite(ratios)):
        raise InvalidInputError(f"{flag}: weights must be positive, got {text!r}")
    return weight_vector(ratios / ratios.sum())


def _cmd_estimate(args) -> int:
    counts = parse_counts(_read_input(args.infile), args.format)
    report = build_estimate_report(counts, with_oracle=args.oracle)
    _write_output(args.out, report_to_json(report))
    return EXIT_OK


def _cmd_simulate(args) -> int:
    weights = tuple(_parse_weights(args.s, "--s")) if args.s is not None else None
    spec = SimulationSpec(
        xi_true=_parse_triple(args.xi, "--xi"),
        mode=args.mode,
        n_shots=args.N,
        weights=weights,
        seed=args.seed,
    )
    counts = simulate(spec)
    text = counts_to_csv(counts) if args.format == "csv" else counts_to_json(counts)
    _write_output(args.out, text)
    return EXIT_OK


def _cmd_bench(args) -> int:
    if args.trials < 1:
        raise InvalidInputError(f"--trials must be >= 1, got {args.trials}")
    result = run_benchmark(args.trials, args.seed)
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["trial", "projection_ms", "oracle_ms", "discrepancy"])
    for row in result.trials:
        writer.writerow([row.index, f"{row.projection_ms:.6f}", f"{row.oracle_ms:.6f}", f"{row.discrepancy:.3e}"])
    _write_output(args.out, buf.getvalue())
    print(
        f"projection mean {result.projection_mean_ms:.4f} ms (median {result.projection_median_ms:.4f}), "
        f"direct search mean {result.oracle_mean_ms:.4f} ms (median {result.oracle_median_ms:.4f}), "
        f"speedup {result.speedup:.1f}x, max discrepancy {result.max_discrepancy:.3e}",
        file=sys.stderr,
    )
    if result.max_discrepancy > DISCREPANCY_TOL:
        print(f"methods disagree beyond {DISCREPANCY_TOL}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def _cmd_trajectories(args) -> int:
    if args.grid < 1:
        raise InvalidInputError(f"--grid must be >= 1, got {args.grid}")
    if args.samples < 2:
        raise InvalidInputError(f"--samples must be >= 2, got {args.samples}")
    weights = _parse_weights(args.s, "--s")
    u_axis, v_axis, _ = PLANES[args.plane]

    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["trajectory_id", "sample_index", "xi1", "xi2", "xi3"])
    trajectory_id = 0
    for u in np.linspace(-1.0, 1.0, args.grid):
        for v in np.linspace(-1.0, 1.0, args.grid):
            start = np.zeros(3)
            start[u_axis], start[v_axis] = u, v
            if norm_squared(start) <= 1.0:
                continue
            curve = projection_trajectory(start, weights, args.samples)
            for k, point in enumerate(curve):
                writer.writerow([trajectory_id, k] + [f"{c:.12g}" for c in point])
            trajectory_id += 1
    _write_output(args.out, buf.getvalue())
    return EXIT_OK


def _cmd_check(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    outcomes = run_suites(names, args.seed)
    for outcome in outcomes:
        status = "PASS" if outcome.passed else "FAIL"
        detail = f" ({outcome.detail})" if outcome.detail else ""
        print(f"{status} {outcome.name}{detail}")
    failed = sum(not o.passed for o in outcomes)
    print(f"{len(outcomes) - failed}/{len(outcomes)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blochmle",
        description="Maximum-likelihood correction of qubit tomography counts "
        "by metric projection onto the Bloch sphere.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="counts file -> JSON estimate report")
    p.add_argument("--in", dest="infile", default="-", help="counts file (JSON or CSV), '-' for stdin")
    p.add_argument("--out", default="-", help="report destination, '-' for stdout")
    p.add_argument("--format", choices=["auto", "json", "csv"], default="auto")
    p.add_argument("--oracle", action="store_true", help="also run the direct-search cross-check")
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("simulate", help="draw synthetic counts")
    p.add_argument("--xi", required=True, help="true Stokes vector a,b,c with norm <= 1")
    p.add_argument("--mode", choices=["standard", "randomized"], default="standard")
    p.add_argument("--N", type=int, required=True, help="shots per axis (standard) or total (randomized)")
    p.add_argument("--s", default=None, help="axis weight ratios a,b,c, normalized (randomized mode)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("bench", help="time projection vs direct search")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("trajectories", help="emit projection curves for a plane of start points")
    p.add_argument("--plane", choices=sorted(PLANES), default="xi1xi2")
    p.add_argument("--grid", type=int, default=9, help="lattice resolution per plane axis")
    p.add_argument("--s", default="1,1,1", help="axis weight ratios a,b,c, normalized")
    p.add_argument("--samples", type=int, default=32, help="points per trajectory")
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_trajectories)

    p = sub.add_parser("check", help="run seeded invariant suites")
    p.add_argument("--suite", choices=["all", *sorted(SUITES)], default="all")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
