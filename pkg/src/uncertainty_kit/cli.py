"""``uncertainty-kit`` command-line entry point.

Exit codes: 0 success, 1 verification found violations, 2 usage or I/O
error (bad arguments, unknown demo, infeasible dimensions, unwritable output).

Operators and density matrices are given as JSON, inline or via a file
path: a row-major nested list whose entries are ``[re, im]`` pairs (plain
numbers are read as real).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import NamedTuple, Sequence

import numpy as np

from . import demos, mixed, sweep
from .errors import UncertaintyKitError
from .operators import PAULI
from .propagation import direct_variance, linear_variance, taylor_family, taylor_validate
from .report import FORMATS, REPORT_COLUMNS, write_report
from .sampling import random_hermitian, random_state


class UsageError(Exception):
    pass


def parse_seeds(text: str) -> range:
    """``"a..b"`` (inclusive) or a single integer."""
    try:
        if ".." in text:
            lo, hi = (int(t) for t in text.split("..", 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise UsageError(f"bad seed range {text!r}; expected a..b") from None
    if lo < 0 or hi < lo:
        raise UsageError(f"seed range {text!r} is empty or negative")
    return range(lo, hi + 1)


def parse_dims(text: str) -> list[int]:
    try:
        dims = [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"bad dims {text!r}") from None
    if not dims or min(dims) < 2:
        raise UsageError(f"dims must be integers >= 2, got {text!r}")
    return dims


def parse_tolerances(items: Sequence[str] | None) -> dict[str, float]:
    out = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep or name not in sweep.DEFAULT_TOLERANCES:
            raise UsageError(f"bad --tol {item!r}; names are {sorted(sweep.DEFAULT_TOLERANCES)}")
        try:
            out[name] = float(value)
        except ValueError:
            raise UsageError(f"bad tolerance value in {item!r}") from None
    return out


def parse_matrix(source: str) -> np.ndarray:
    """Matrix from inline JSON, a JSON file path, or a Pauli name (``x``, ``y``, ``z``)."""
    if source.lower() in PAULI:
        return PAULI[source.lower()].copy()
    text = source
    if os.path.exists(source):
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"cannot parse matrix {source!r}: {exc}") from None

    def entry(v):
        if isinstance(v, list):
            if len(v) != 2:
                raise UsageError(f"complex entries must be [re, im] pairs, got {v!r}")
            return complex(v[0], v[1])
        return complex(v)

    try:
        m = np.array([[entry(v) for v in row] for row in data], dtype=np.complex128)
    except TypeError:
        raise UsageError(f"matrix {source!r} must be a nested list of rows") from None
    if m.ndim != 2:
        raise UsageError(f"matrix {source!r} is not rectangular")
    return m


def matrix_to_json(m: np.ndarray) -> str:
    return json.dumps([[[float(v.real), float(v.imag)] for v in row] for row in np.asarray(m, dtype=complex)])


def _emit(rows, columns, args) -> None:
    if args.out is None or args.out == "-":
        write_report(rows, columns, args.format, sys.stdout)
        return
    try:
        write_report(rows, columns, args.format, args.out)
    except OSError as exc:
        raise UsageError(f"cannot write {args.out}: {exc.strerror or exc}") from None


def cmd_verify(args) -> int:
    rows, violations = sweep.run_verify(
        parse_dims(args.dims), parse_seeds(args.seeds), parse_tolerances(args.tol), negate=args.self_test_negate
    )
    _emit(rows, REPORT_COLUMNS, args)
    for v in violations:
        r = v.row
        print(f"VIOLATION {r.relation_id} dim={r.dim} seed={r.seed}: {v.reason}", file=sys.stderr)
    print(f"verify: {len(rows)} rows, {len(violations)} violations", file=sys.stderr)
    return 1 if violations else 0


def cmd_demo(args) -> int:
    if args.name not in demos.DEMOS:
        raise UsageError(f"unknown demo {args.name!r}; choose from {sorted(demos.DEMOS)}")
    _emit(demos.run_demo(args.name), demos.DEMO_COLUMNS, args)
    return 0


class OptimizeRow(NamedTuple):
    relation: str
    d_e: int
    best_rhs: float
    lhs: float | None
    gap: float | None
    restarts: int
    best_seed: int | None
    plateau: float | None
    conjecture_consistent: bool | None


OPTIMIZE_COLUMNS = OptimizeRow._fields
PLATEAU_TOL = 1e-3


def cmd_optimize(args) -> int:
    a, b, rho = parse_matrix(args.a), parse_matrix(args.b), parse_matrix(args.rho)
    try:
        if args.replay_seed is not None:
            d_e = int(args.d_e)
            value = mixed.replay_restart(args.relation, a, b, rho, d_e, args.replay_seed, sign=args.sign)
            rows = [OptimizeRow(args.relation, d_e, value, None, None, 1, args.replay_seed, None, None)]
        elif ".." in args.d_e:
            lo, hi = (int(t) for t in args.d_e.split("..", 1))
            if args.relation != "mp1":
                raise UsageError("a d_E sweep is only defined for mp1")
            sweep_rows = mixed.conjecture_sweep(a, b, rho, range(lo, hi + 1), args.budget, args.seed, args.sign)
            rows = [
                OptimizeRow(
                    "mp1",
                    r.d_e,
                    r.best_rhs,
                    r.lhs,
                    r.lhs - r.best_rhs,
                    r.restarts,
                    r.best_seed,
                    r.plateau,
                    None if r.plateau is None else abs(r.plateau) <= PLATEAU_TOL,
                )
                for r in sweep_rows
            ]
        else:
            res = mixed.optimize_mixed_bound(args.relation, a, b, rho, int(args.d_e), args.budget, args.seed, args.sign)
            rows = [
                OptimizeRow(args.relation, res.d_e, res.best_rhs, res.lhs, res.gap, res.restarts, res.best_seed, None, None)
            ]
    except ValueError as exc:
        # DimensionError and ConstraintError derive from ValueError
        raise UsageError(str(exc)) from None
    _emit(rows, OPTIMIZE_COLUMNS, args)
    return 0


class PropagateRow(NamedTuple):
    check: str
    dim: int
    seed: int
    exact: float
    approx: float
    rel_error: float


PROPAGATE_COLUMNS = PropagateRow._fields


def cmd_propagate(args) -> int:
    rows = []
    for d in parse_dims(args.dims):
        for s in parse_seeds(args.seeds):
            rng = np.random.default_rng([s, d])
            ops = [random_hermitian(d, rng) for _ in range(3)]
            coeffs = rng.standard_normal(3)
            psi = random_state(d, rng)
            exact = direct_variance(coeffs, ops, psi)
            approx = linear_variance(coeffs, ops, psi)
            rows.append(PropagateRow("linear", d, s, exact, approx, abs(exact - approx) / max(exact, 1e-300)))
            for scale in (1.0, 0.5, 0.25):
                a, b, psi_t = taylor_family(scale, d, s)
                chk = taylor_validate(lambda u, v: u * v, [a, b], psi_t)
                rows.append(PropagateRow(f"taylor.product.s={scale:g}", d, s, chk.exact, chk.approx, chk.rel_error))
    _emit(rows, PROPAGATE_COLUMNS, args)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="csv")
    common.add_argument("--out", default=None, help="output path (stdout when omitted)")

    parser = argparse.ArgumentParser(prog="uncertainty-kit", description="Uncertainty-relation toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="randomized sweep over all relations and identities")
    p.add_argument("--dims", default="2,3,4,8")
    p.add_argument("--seeds", default="0..999", help="inclusive range a..b")
    p.add_argument("--tol", action="append", metavar="NAME=VALUE", help="inequality, identity or saturation")
    p.add_argument("--self-test-negate", action="store_true", help="inject a sign fault to exercise failure handling")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("demo", parents=[common], help="canonical examples")
    p.add_argument("name", help=f"one of {', '.join(demos.DEMOS)}")
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("optimize", parents=[common], help="maximize a mixed-state bound over amplitude operators")
    p.add_argument("--relation", choices=("mp1", "mp2"), default="mp1")
    p.add_argument("--a", default="x", help="matrix JSON, file, or Pauli name")
    p.add_argument("--b", default="y")
    p.add_argument("--rho", required=True)
    p.add_argument("--d-e", default="2", help="environment dimension, or a..b for a sweep")
    p.add_argument("--budget", type=int, default=32, help="number of restarts")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sign", type=int, choices=(1, -1), default=1)
    p.add_argument("--replay-seed", type=int, default=None, help="re-run one restart by its recorded seed")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("propagate", parents=[common], help="check propagation formulas")
    p.add_argument("--dims", default="2,3,4")
    p.add_argument("--seeds", default="0..9")
    p.set_defaults(func=cmd_propagate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, UncertaintyKitError) as exc:
        print(f"uncertainty-kit: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
