"""Command-line driver: verification suites and example constructors.

``oalab run --suite NAME [--dim N] [--trials K] [--seed S] [--tol X]
[--out PATH]`` executes one registered suite and prints one line per case;
``oalab example NAME [--size N] --out PATH`` writes a constructed example
as JSON.  Exit codes: 0 all cases pass, 1 at least one assertion failed,
2 usage error (unknown suite or example, invalid flags).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from typing import Optional, Sequence

from .examples import example_rdr, example_two_dim, volterra
from .matcore import DEFAULT_TOL, matrix_to_json, spectral_radius
from .suites import SUITE_NAMES, SuiteConfig, emit_report, run_suite

__all__ = ["main", "build_parser"]

_EXAMPLE_NAMES = ("two-dim", "rdr", "volterra")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oalab",
        description="Verification suites for the operator-cone laboratory.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_parser = sub.add_parser("run", help="execute a named verification suite")
    run_parser.add_argument(
        "--suite", required=True, help=f"one of: {', '.join(SUITE_NAMES)}"
    )
    run_parser.add_argument("--dim", type=int, help="matrix dimension cap")
    run_parser.add_argument("--trials", type=int, help="sample count")
    run_parser.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    run_parser.add_argument(
        "--tol", type=float, help="override the iterative tolerance (iter_tol)"
    )
    run_parser.add_argument("--out", help="write the JSON report to this path")

    example_parser = sub.add_parser("example", help="emit a constructed example as JSON")
    example_parser.add_argument("name", help=f"one of: {', '.join(_EXAMPLE_NAMES)}")
    example_parser.add_argument("--size", type=int, help="example size parameter")
    example_parser.add_argument("--out", required=True, help="output JSON path")
    return parser


def _example_payload(name: str, size: Optional[int]) -> dict:
    if name == "two-dim":
        algebra = example_two_dim()
        return {"example": name, "payload": json.loads(algebra.to_json())}
    if name == "rdr":
        n = size if size is not None else 4
        ex = example_rdr(n)
        return {
            "example": name,
            "size": n,
            "payload": {
                "n": ex.n,
                "min_commutator": float(ex.min_commutator),
                "r": matrix_to_json(ex.r),
                "r_inv": matrix_to_json(ex.r_inv),
                "basis": [matrix_to_json(b) for b in ex.basis],
            },
        }
    if name == "volterra":
        n = size if size is not None else 100
        v = volterra(n)
        return {
            "example": name,
            "size": n,
            "payload": {
                "matrix": matrix_to_json(v),
                "spectral_radius": spectral_radius(v),
            },
        }
    raise KeyError(f"unknown example {name!r}; registered: {', '.join(_EXAMPLE_NAMES)}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "run":
        tol = DEFAULT_TOL
        if args.tol is not None:
            if args.tol <= 0:
                print("error: --tol must be positive", file=sys.stderr)
                return 2
            tol = dataclasses.replace(DEFAULT_TOL, iter_tol=args.tol)
        try:
            cfg = SuiteConfig(
                suite=args.suite,
                dim=args.dim,
                trials=args.trials,
                seed=args.seed,
                tol=tol,
                out=args.out,
            )
            report = run_suite(cfg)
        except (KeyError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        for case in report.cases:
            print(
                f"{report.suite}/{case['name']}: {case['status']}"
                f" (margin {case['margin']:.3e}, tol {case['tol']:.1e})"
            )
        if args.out:
            try:
                emit_report(report, args.out)
            except OSError as exc:
                print(f"error: cannot write report: {exc}", file=sys.stderr)
                return 2
            print(f"report written to {args.out}")
        return 0 if report.passed else 1

    if args.command == "example":
        try:
            payload = _example_payload(args.name, args.size)
        except (KeyError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        try:
            with open(args.out, "w", encoding="utf-8") as handle:
                json.dump(payload, handle, sort_keys=True, indent=2)
                handle.write("\n")
        except OSError as exc:
            print(f"error: cannot write example: {exc}", file=sys.stderr)
            return 2
        print(f"example written to {args.out}")
        return 0

    parser.error(f"unknown command {args.command!r}")
    return 2


if __name__ == "__main__":
    sys.exit(main())
