"""q-sweep over (n, q) cells and its CSV / JSON-lines output."""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from qcomm.functionals import bound_c
from qcomm.matio import write_matrix
from qcomm.optimizer import VIOLATION_TOL, OptimizeConfig, optimize_cell

COLUMNS = ("n", "q", "best_ratio", "c_q", "gap", "iterations", "restarts", "converged", "seed")


@dataclass(frozen=True)
class SweepRecord:
    n: int
    q: float
    best_ratio: float
    c_q: float
    gap: float
    iterations: int
    restarts: int
    converged: bool
    seed: int

    @property
    def violation(self) -> bool:
        return self.gap < -VIOLATION_TOL


def q_grid(q_min: float, q_max: float, step: float) -> list[float]:
    """Inclusive grid ``q_min + k*step``, rounded to kill accumulation error."""
    if not step > 0:
        raise ValueError("q step must be positive")
    if q_max < q_min:
        raise ValueError("q_max must be >= q_min")
    m = int(math.floor((q_max - q_min) / step + 1e-9))
    return [round(q_min + k * step, 12) for k in range(m + 1)]


def cell_seed(seed: int, n: int, q_index: int) -> int:
    """Seed for one cell, a pure function of (seed, n, q_index)."""
    ss = np.random.SeedSequence(seed, spawn_key=(n, q_index))
    return int(ss.generate_state(1, np.uint64)[0])


def _run_cell(args):
    n, q, cseed, restarts, max_iters, tol = args
    res = optimize_cell(OptimizeConfig(n=n, q=q, restarts=restarts, max_iters=max_iters, tol=tol, seed=cseed))
    rec = SweepRecord(
        n=n,
        q=q,
        best_ratio=res.best_ratio,
        c_q=bound_c(q).c,
        gap=res.gap,
        iterations=res.iterations_used,
        restarts=res.restarts_used,
        converged=res.converged,
        seed=cseed,
    )
    pair = (res.a_opt, res.b_opt) if rec.violation else None
    return rec, pair


def run_sweep(ns, qs, *, restarts=16, max_iters=500, tol=1e-10, seed=0, workers=1, on_record=None):
    """One :class:`SweepRecord` per (n, q), ordered by n then q.

    Returns ``(records, violations)`` where `violations` maps ``(n, q)`` to
    the offending ``(A, B)``. Results do not depend on `workers`.
    """
    tasks = [
        (n, q, cell_seed(seed, n, qi), restarts, max_iters, tol)
        for n in sorted(set(ns))
        for qi, q in enumerate(qs)
    ]
    records, violations = [], {}
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_run_cell, tasks)
            for rec, pair in results:
                _collect(rec, pair, records, violations, on_record)
    else:
        for task in tasks:
            _collect(*_run_cell(task), records, violations, on_record)
    return records, violations


def _collect(rec, pair, records, violations, on_record):
    records.append(rec)
    if pair is not None:
        violations[(rec.n, rec.q)] = pair
    if on_record:
        on_record(rec)


def _row(rec: SweepRecord) -> list[str]:
    return [
        str(rec.n), repr(rec.q), repr(rec.best_ratio), repr(rec.c_q), repr(rec.gap),
        str(rec.iterations), str(rec.restarts), "true" if rec.converged else "false", str(rec.seed),
    ]


def to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for rec in records:
        w.writerow(_row(rec))
    return buf.getvalue()


def to_jsonl(records) -> str:
    return "".join(json.dumps({k: asdict(r)[k] for k in COLUMNS}) + "\n" for r in records)


def read_csv(text: str) -> list[SweepRecord]:
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        out.append(SweepRecord(
            n=int(row["n"]), q=float(row["q"]), best_ratio=float(row["best_ratio"]), c_q=float(row["c_q"]),
            gap=float(row["gap"]), iterations=int(row["iterations"]), restarts=int(row["restarts"]),
            converged=row["converged"] == "true", seed=int(row["seed"]),
        ))
    return out


def summarize(records) -> dict:
    per_n = {}
    for r in records:
        s = per_n.setdefault(r.n, {"cells": 0, "max_abs_gap": 0.0, "violations": 0})
        s["cells"] += 1
        s["max_abs_gap"] = max(s["max_abs_gap"], abs(r.gap))
        s["violations"] += int(r.violation)
    return {"per_n": per_n, "violations": sum(s["violations"] for s in per_n.values())}


def dump_violations(violations, directory) -> list[Path]:
    """Write each offending pair as ``n{n}_q{q}_A.txt`` / ``_B.txt``."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    paths = []
    for (n, q), (a, b) in sorted(violations.items()):
        for name, m in (("A", a), ("B", b)):
            p = d / f"n{n}_q{q!r}_{name}.txt"
            write_matrix(p, m)
            paths.append(p)
    return paths
