"""Command-line front end: ``qcomm {eval,sweep,verify,witness}``.

Exit codes: 0 pass, 1 check failure or conjecture violation, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from qcomm.errors import DegenerateInputError, DimensionError
from qcomm.functionals import bound_c, f_func, make_witness, r_func, ratio
from qcomm.matcore import fro_norm_sq
from qcomm.matio import MatrixFormatError, read_matrix, write_matrix
from qcomm.sweep import dump_violations, q_grid, run_sweep, summarize, to_csv, to_jsonl
from qcomm.verifier import CHECKS, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _default_seed() -> int:
    env = os.environ.get("QCOMM_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"QCOMM_SEED must be an integer, got {env!r}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise UsageError(f"cannot write {out}: {exc}") from exc
    else:
        sys.stdout.write(text)


def cmd_eval(args) -> int:
    try:
        a, b = read_matrix(args.a), read_matrix(args.b)
    except (OSError, MatrixFormatError) as exc:
        raise UsageError(str(exc)) from exc
    if a.shape != b.shape:
        raise UsageError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    p = bound_c(args.q)
    rec = {
        "n": a.shape[0],
        "q": p.q,
        "f": f_func(a, b, p.q),
        "r": r_func(a, b),
        "norm_a_sq": fro_norm_sq(a),
        "norm_b_sq": fro_norm_sq(b),
        "c_q": p.c,
    }
    try:
        rec["ratio"] = ratio(a, b, p.q)
        rec["gap"] = p.c - rec["ratio"]
    except DegenerateInputError:
        rec["ratio"] = rec["gap"] = None
    if p.q == -1.0:
        # closed form at q = -1 printed next to f as a cross-check
        rec["closed_form_q_minus_1"] = fro_norm_sq(b @ a) - fro_norm_sq(a @ b)
    print(json.dumps(rec))
    return EXIT_OK


def cmd_witness(args) -> int:
    try:
        w = make_witness(args.q, args.n)
    except DimensionError as exc:
        raise UsageError(str(exc)) from exc
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        write_matrix(out / "A.txt", w.a)
        write_matrix(out / "B.txt", w.b)
        meta = {"q": w.params.q, "n": args.n, "c_q": w.params.c, "eps1": w.params.eps1, "eps2": w.params.eps2,
                "expected_ratio": w.params.c, "ratio": w.ratio}
        (out / "witness.json").write_text(json.dumps(meta, indent=2) + "\n")
    except OSError as exc:
        raise UsageError(f"cannot write witness to {out}: {exc}") from exc
    print(json.dumps(meta))
    return EXIT_OK


def cmd_sweep(args) -> int:
    ns = args.n or [2, 5, 10, 15]
    if min(ns) < 2:
        raise UsageError("every --n must be >= 2")
    try:
        qs = [float(q) for q in args.q] if args.q else q_grid(args.q_min, args.q_max, args.q_step)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    seed = args.seed if args.seed is not None else _default_seed()
    if args.out:
        parent = Path(args.out).resolve().parent
        if not parent.is_dir():
            raise UsageError(f"output directory {parent} does not exist")

    def progress(rec):
        if args.verbose:
            print(f"n={rec.n} q={rec.q:g} ratio={rec.best_ratio:.15g} gap={rec.gap:.3e}", file=sys.stderr)

    records, violations = run_sweep(
        ns, qs, restarts=args.restarts, max_iters=args.max_iters, tol=args.tol, seed=seed,
        workers=args.workers, on_record=progress,
    )
    _emit(to_csv(records) if args.format == "csv" else to_jsonl(records), args.out)
    summary = summarize(records)
    if violations:
        side = Path(args.out).with_suffix(".violations") if args.out else Path("qcomm-violations")
        summary["violation_files"] = [str(p) for p in dump_violations(violations, side)]
    print(json.dumps({"summary": summary}), file=sys.stderr)
    return EXIT_FAIL if violations else EXIT_OK


def cmd_verify(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    lines = []

    def emit(rep):
        line = json.dumps(rep.as_dict(), default=str)
        lines.append(line)
        if not args.out:
            print(line, flush=True)

    reports = run_suite(
        seed=seed, only=args.only, trials=args.trials, samples=args.samples,
        dense_q=args.q_grid == "dense", c_shift=args.inject_fault or 0.0, on_report=emit,
    )
    failed = [r.name for r in reports if not r.passed]
    summary = json.dumps({"summary": {"checks": len(reports), "failed": failed, "pass": not failed}})
    if args.out:
        _emit("\n".join(lines + [summary]) + "\n", args.out)
    else:
        print(summary)
    if failed:
        print(f"FAILED: {', '.join(failed)}", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qcomm", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="evaluate f, r, norms and ratio for two matrix files")
    e.add_argument("a", help="matrix file for A")
    e.add_argument("b", help="matrix file for B")
    e.add_argument("--q", type=float, required=True)
    e.set_defaults(func=cmd_eval)

    w = sub.add_parser("witness", help="write an extremal pair attaining c(q)")
    w.add_argument("--q", type=float, required=True)
    w.add_argument("--n", type=int, default=2)
    w.add_argument("--out", required=True, help="output directory")
    w.set_defaults(func=cmd_witness)

    s = sub.add_parser("sweep", help="estimate sup f/(|A|^2|B|^2) over a (n, q) grid")
    s.add_argument("--n", type=int, action="append", help="dimension; repeatable (default 2 5 10 15)")
    s.add_argument("--q", action="append", help="explicit q value; repeatable, overrides the range")
    s.add_argument("--q-min", type=float, default=-2.0)
    s.add_argument("--q-max", type=float, default=3.0)
    s.add_argument("--q-step", type=float, default=0.25)
    s.add_argument("--restarts", type=int, default=16)
    s.add_argument("--max-iters", type=int, default=500)
    s.add_argument("--tol", type=float, default=1e-10)
    s.add_argument("--seed", type=int, default=None, help="base seed (fallback: $QCOMM_SEED, then 0)")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    s.add_argument("--out", default=None, help="output file (default stdout)")
    s.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify", help="run the identity and bound-sampling suites")
    v.add_argument("--only", action="append", choices=CHECKS, help="run only this check; repeatable")
    v.add_argument("--q-grid", choices=("default", "dense"), default="default")
    v.add_argument("--trials", type=int, default=1000)
    v.add_argument("--samples", type=int, default=100_000)
    v.add_argument("--seed", type=int, default=None)
    v.add_argument("--inject-fault", type=float, nargs="?", const=1e-6, default=None, metavar="SHIFT",
                   help="perturb c(q) by SHIFT (default 1e-6) to confirm the suite fails")
    v.add_argument("--out", default=None)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if getattr(args, "restarts", 1) < 1 or getattr(args, "max_iters", 1) < 1:
            raise UsageError("--restarts and --max-iters must be >= 1")
        if getattr(args, "tol", 1.0) <= 0:
            raise UsageError("--tol must be positive")
        if getattr(args, "workers", 1) < 1:
            raise UsageError("--workers must be >= 1")
        return args.func(args)
    except UsageError as exc:
        print(f"qcomm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
