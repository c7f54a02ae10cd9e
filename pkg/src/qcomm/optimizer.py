"""Alternating spectral ascent for ``sup f(A,B;q) / (||A||^2 ||B||^2)``.

With `B` fixed, ``f`` is a Hermitian quadratic form in ``vec(A)``, so the
best unit-norm `A` is the top eigenvector of that form; symmetrically for
`B`. Alternating the two exact block solves never decreases ``f``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from qcomm import kernels
from qcomm.errors import DegenerateInputError, EigenSolverError
from qcomm.functionals import NORM_FLOOR, bound_c, f_func, make_witness
from qcomm.matcore import HermitianForm, as_matrix, fro_norm_sq, random_ginibre, top_eigpair, unit, unvec

log = logging.getLogger(__name__)

__all__ = [
    "OptimizeConfig",
    "OptimizeResult",
    "RestartInfo",
    "lift_form_in_A",
    "lift_form_in_B",
    "optimize_cell",
    "restart_rng",
]

VIOLATION_TOL = 1e-6


def lift_form_in_A(b, q: float) -> HermitianForm:
    """Form `H` with ``vec(A)^* H vec(A) == f(A, B; q)`` for every `A`."""
    b = as_matrix(b)
    if fro_norm_sq(b) <= NORM_FLOOR:
        raise DegenerateInputError("cannot lift with a zero B")
    return HermitianForm(kernels.lift_a(b, float(q)))


def lift_form_in_B(a, q: float) -> HermitianForm:
    """Form `K` with ``vec(B)^* K vec(B) == f(A, B; q)`` for every `B`."""
    a = as_matrix(a)
    if fro_norm_sq(a) <= NORM_FLOOR:
        raise DegenerateInputError("cannot lift with a zero A")
    return HermitianForm(kernels.lift_b(a, float(q)))


@dataclass(frozen=True)
class OptimizeConfig:
    n: int
    q: float
    restarts: int = 16
    max_iters: int = 500
    tol: float = 1e-10
    seed: int = 0
    witness_seed: bool = True

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.restarts < 1 or self.max_iters < 1:
            raise ValueError("restarts and max_iters must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if not math.isfinite(self.q):
            raise ValueError("q must be finite")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


@dataclass
class RestartInfo:
    index: int
    witness_seeded: bool
    ratio: float = float("nan")
    iterations: int = 0
    converged: bool = False
    error: str | None = None
    trace: list[float] = field(default_factory=list)


@dataclass
class OptimizeResult:
    config: OptimizeConfig
    best_ratio: float
    a_opt: np.ndarray | None
    b_opt: np.ndarray | None
    iterations_used: int
    restarts_used: int
    converged: bool
    trace: list[float]
    restarts: list[RestartInfo]

    @property
    def c(self) -> float:
        return bound_c(self.config.q).c

    @property
    def gap(self) -> float:
        return self.c - self.best_ratio

    @property
    def violation(self) -> bool:
        """True when the search beat ``c(q)`` by more than the tolerance."""
        return self.gap < -VIOLATION_TOL

    @property
    def diagnostics(self) -> list[str]:
        return [f"restart {r.index}: {r.error}" for r in self.restarts if r.error]


def restart_rng(seed: int, restart: int) -> np.random.Generator:
    """Generator for one restart; independent of how restarts are scheduled."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(restart,)))


def _ascend(b: np.ndarray, q: float, max_iters: int, tol: float, info: RestartInfo, keep_trace: bool):
    n = b.shape[0]
    prev = -math.inf
    a = None
    for it in range(1, max_iters + 1):
        _, va = top_eigpair(lift_form_in_A(b, q))
        a = unit(unvec(va, n))
        if keep_trace:
            info.trace.append(f_func(a, b, q))
        _, vb = top_eigpair(lift_form_in_B(a, q))
        b = unit(unvec(vb, n))
        cur = f_func(a, b, q)
        if keep_trace:
            info.trace.append(cur)
        info.iterations = it
        if cur - prev <= tol * max(abs(cur), NORM_FLOOR):
            info.converged = True
            break
        prev = cur
    info.ratio = f_func(a, b, q)
    return a, b


def optimize_cell(cfg: OptimizeConfig, keep_trace: bool = False) -> OptimizeResult:
    """Best ratio over `cfg.restarts` alternating-ascent runs.

    Restart 0 starts from the witness `B` when ``cfg.witness_seed`` is set;
    the others start from a normalized Ginibre `B`. A restart whose
    eigensolve fails is recorded and skipped.
    """
    q = float(cfg.q)
    infos = []
    best = (-math.inf, None, None, None)
    for r in range(cfg.restarts):
        seeded = cfg.witness_seed and r == 0
        info = RestartInfo(index=r, witness_seeded=seeded)
        infos.append(info)
        if seeded:
            b0 = unit(make_witness(q, cfg.n).b)
        else:
            b0 = unit(random_ginibre(cfg.n, restart_rng(cfg.seed, r)))
        try:
            a, b = _ascend(b0, q, cfg.max_iters, cfg.tol, info, keep_trace)
        except (EigenSolverError, DegenerateInputError) as exc:
            info.error = str(exc)
            log.warning("n=%d q=%g restart %d aborted: %s", cfg.n, q, r, exc)
            continue
        if info.ratio > best[0]:
            best = (info.ratio, a, b, info)

    ratio_, a, b, binfo = best
    result = OptimizeResult(
        config=cfg,
        best_ratio=ratio_ if binfo is not None else float("nan"),
        a_opt=a,
        b_opt=b,
        iterations_used=sum(i.iterations for i in infos),
        restarts_used=sum(1 for i in infos if i.error is None),
        converged=binfo.converged if binfo is not None else False,
        trace=list(binfo.trace) if binfo is not None else [],
        restarts=infos,
    )
    if result.violation:
        log.error(
            "conjecture violation: n=%d q=%r ratio=%r exceeds c(q)=%r by %.3e",
            cfg.n, q, result.best_ratio, result.c, -result.gap,
        )
    return result
