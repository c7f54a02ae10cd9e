"""Floating-point verification of the algebra behind the bound ``f <= c ||A||^2 ||B||^2``.

Each check evaluates two independent sides of an identity (or the two sides
of an inequality) on random inputs and returns an :class:`IdentityReport`.
Residuals are divided by ``||A||^2 ||B||^2`` (or the analogous scale) so
tolerances are relative. Index sums come from :mod:`qcomm.kernels`, which
loops over index quadruples exactly as the sums are written.

Index sets over quadruples ``(i, j, k, l)``, each paired with the weight
``|a_ij|^2 |b_kl|^2``:

* D0: ``i = j = k = l``
* D1: ``(i, j, j, i)`` with ``i != j``
* D2: ``(i, j, k, i)`` with ``j != k``
* D3: ``(i, j, j, k)`` with ``i != k``
* D4: everything else (contains D0)
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field

import numpy as np

from qcomm import kernels
from qcomm.functionals import QParams, bound_c, f_func, make_witness
from qcomm.matcore import as_matrix, fro_norm_sq, random_ginibre, random_normal_matrix

__all__ = [
    "CHECKS",
    "DEFAULT_Q_GRID",
    "IdentityReport",
    "check_combination",
    "check_decomposition",
    "check_index_partition",
    "check_lemma1",
    "check_lemma2",
    "check_n2_identity",
    "check_normal_reduction",
    "classify",
    "decomposition_terms",
    "enumerate_index_sets",
    "n2_groups",
    "run_suite",
    "sample_bound",
]

DEFAULT_Q_GRID = (-2.0, -1.0, 0.0, 0.5, 1.0, 2.0)


@dataclass
class IdentityReport:
    name: str
    trials: int
    max_residual: float
    tol: float
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.max_residual <= self.tol)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "trials": self.trials,
            "max_residual": self.max_residual,
            "tol": self.tol,
            "pass": self.passed,
            **({"details": self.details} if self.details else {}),
        }


def _params(q: float, c_shift: float = 0.0) -> QParams:
    p = bound_c(q)
    if c_shift:
        p = QParams(p.q, p.c + c_shift, p.eps1, p.eps2)
    return p


def _rel(resid: float, scale: float) -> float:
    return abs(resid) / scale if scale > 0 else abs(resid)


# -- index sets --------------------------------------------------------------


def classify(i: int, j: int, k: int, l: int) -> int:
    """Which of D1..D4 contains the quadruple (i, j, k, l)."""
    return kernels.index_class(i, j, k, l)


def enumerate_index_sets(n: int) -> dict[str, list[tuple[int, int, int, int]]]:
    """All ``n**4`` quadruples (0-based) split into D1..D4, plus D0 inside D4."""
    if n < 1:
        raise ValueError("n must be positive")
    sets = {f"D{m}": [] for m in range(5)}
    for t in itertools.product(range(n), repeat=4):
        sets[f"D{classify(*t)}"].append(t)
        if t[0] == t[1] == t[2] == t[3]:
            sets["D0"].append(t)
    return sets


def check_index_partition(max_n: int = 6) -> IdentityReport:
    """Disjointness, coverage, ``D0 in D4`` and closed-form cardinalities for n <= max_n."""
    bad = []
    for n in range(1, max_n + 1):
        s = enumerate_index_sets(n)
        parts = [set(s[f"D{m}"]) for m in range(1, 5)]
        union = set().union(*parts)
        disjoint = sum(len(p) for p in parts) == len(union)
        # independent definitions, straight from the set-builder notation
        d1 = {(i, j, j, i) for i in range(n) for j in range(n) if i != j}
        d2 = {(i, j, k, i) for i in range(n) for j in range(n) for k in range(n) if j != k}
        d3 = {(i, j, j, k) for i in range(n) for j in range(n) for k in range(n) if i != k}
        d0 = {(i, i, i, i) for i in range(n)}
        everything = set(itertools.product(range(n), repeat=4))
        ok = (
            disjoint
            and union == everything
            and parts[0] == d1 and parts[1] == d2 and parts[2] == d3
            and parts[3] == everything - (d1 | d2 | d3)
            and set(s["D0"]) == d0 and d0 <= parts[3]
            and len(d1) == n * (n - 1)
            and len(d2) == len(d3) == n * n * (n - 1)
        )
        if not ok:
            bad.append(n)
    return IdentityReport("index_partition", max_n, float(len(bad)), 0.0, {"failed_n": bad} if bad else {})


# -- constants ---------------------------------------------------------------


def check_lemma1(qs: Iterable[float] | None = None, tol: float = 1e-12, c_shift: float = 0.0) -> IdentityReport:
    """``2 eps1 sqrt((c-q)(c-1)) = q+1`` and ``2 eps2 sqrt(c(c-q-1)) = 1-q`` over a q grid."""
    if qs is None:
        qs = lemma1_grid()
    worst, worst_q, count = 0.0, None, 0
    for q in qs:
        r = max(abs(x) for x in _params(q, c_shift).lemma_residuals)
        count += 1
        if r > worst or worst_q is None:
            worst, worst_q = r, q
    return IdentityReport("lemma1", count, worst, tol, {"worst_q": worst_q})


def lemma1_grid(lo: float = -5.0, hi: float = 5.0, step: float = 0.01) -> list[float]:
    """Inclusive grid, rounded so that -1, 0 and 1 are hit exactly."""
    m = int(math.floor((hi - lo) / step + 1e-9))
    return [round(lo + k * step, 12) for k in range(m + 1)]


# -- decompositions ------------------------------------------------------------


def decomposition_terms(a, b, q: float, c_shift: float = 0.0) -> dict[str, float]:
    """Both sides of every display in the general decomposition of ``c||A||^2||B||^2 - f``.

    Returns ``direct`` (computed from ``f_func``) and the right-hand sides
    ``combination`` (the D-weighted form), ``lemma2_lhs``/``lemma2_rhs``
    and ``decomposition`` (sum of squares plus the remaining index sums).
    Index-sum sides are complex; their imaginary parts cancel in exact
    arithmetic and count towards the residual.
    """
    a, b = as_matrix(a), as_matrix(b)
    p = _params(q, c_shift)
    c, q = p.c, p.q
    s = kernels.index_sums(a, b)
    sq = kernels.square_sum(a, b, q, c, p.eps1)
    direct = c * fro_norm_sq(a) * fro_norm_sq(b) - f_func(a, b, q)
    combination = (
        c * s["w4"] + (c - 1) * s["w2"] + (c - q) * s["w3"] + (c - 1 - q) * s["w1"]
        - s["x1"] - q * s["x2"] + (1 + q) * s["x3"]
    )
    lemma2_rhs = (
        (c - 1) * s["w2"] + (c - q) * s["w3"]
        + (c - 1) * s["x1_jl"] + (c - q) * s["x2_ik"] + (1 + q) * s["x3_ik"]
    )
    decomposition = (
        sq + c * s["w4"] + (c - 1 - q) * s["w1"]
        - c * (s["x1_jl"] + s["x2_ik"])
        - s["y1"] - q * s["y2"] + (1 + q) * s["y3"]
    )
    return {
        "direct": direct,
        "combination": complex(combination),
        "lemma2_lhs": sq,
        "lemma2_rhs": complex(lemma2_rhs),
        "decomposition": complex(decomposition),
        "scale": fro_norm_sq(a) * fro_norm_sq(b),
    }


def _residual(x, y) -> float:
    return abs(complex(x) - complex(y))


def _pairs(rng, trials, ns, qs, ensemble=random_ginibre):
    combos = list(itertools.product(ns, qs))
    for t in range(trials):
        n, q = combos[t % len(combos)]
        yield n, q, ensemble(n, rng), random_ginibre(n, rng)


def _worst(name, rows: Iterable[tuple[float, dict]], tol) -> IdentityReport:
    worst, where, count = 0.0, {}, 0
    for r, ctx in rows:
        count += 1
        if r > worst or count == 1:
            worst, where = r, ctx
    return IdentityReport(name, count, worst, tol, {"worst": where})


def check_combination(rng, trials=1000, ns=(2, 3, 4), qs=DEFAULT_Q_GRID, tol=1e-10, c_shift=0.0):
    """Direct value vs. the D-weighted expansion with the three cross sums."""
    def rows():
        for n, q, a, b in _pairs(rng, trials, ns, qs):
            t = decomposition_terms(a, b, q, c_shift)
            yield _rel(_residual(t["direct"], t["combination"]), t["scale"]), {"n": n, "q": q}
    return _worst("combination", rows(), tol)


def check_lemma2(rng, trials=1000, ns=(2, 3, 4), qs=DEFAULT_Q_GRID, tol=1e-10, c_shift=0.0):
    """Sum of squared moduli over i != k vs. its expansion into index sums."""
    def rows():
        for n, q, a, b in _pairs(rng, trials, ns, qs):
            t = decomposition_terms(a, b, q, c_shift)
            yield _rel(_residual(t["lemma2_lhs"], t["lemma2_rhs"]), t["scale"]), {"n": n, "q": q}
    return _worst("lemma2", rows(), tol)


def check_decomposition(a=None, b=None, q=None, *, rng=None, trials=1000, ns=(2, 3, 4),
                        qs=DEFAULT_Q_GRID, tol=1e-10, c_shift=0.0) -> IdentityReport:
    """``c||A||^2||B||^2 - f`` directly vs. the sum-of-squares decomposition.

    With explicit `a`, `b`, `q` checks that one point; otherwise runs
    `trials` random pairs cycling through `ns` x `qs`.
    """
    if a is not None:
        t = decomposition_terms(a, b, q, c_shift)
        r = _rel(_residual(t["direct"], t["decomposition"]), t["scale"])
        return IdentityReport("decomposition", 1, r, tol, {"direct": t["direct"], "rhs": t["decomposition"].real})

    def rows():
        for n, q_, a_, b_ in _pairs(rng, trials, ns, qs):
            t = decomposition_terms(a_, b_, q_, c_shift)
            yield _rel(_residual(t["direct"], t["decomposition"]), t["scale"]), {"n": n, "q": q_}
    return _worst("decomposition", rows(), tol)


def n2_groups(a, b, q: float, c_shift: float = 0.0) -> dict[str, float]:
    """Pieces of the 2x2 sum-of-squares identity.

    ``direct = c||A||^2||B||^2 - f``; ``square_sum`` is the i != k squared
    group, ``cross`` is ``c |a11 ~b22 + a22 ~b11 - a12 ~b12 - a21 ~b21|^2``,
    ``diagonal`` is the final squared modulus. ``direct`` equals the sum of
    the three. Also returns the intermediate forms for the cross-square
    expansion, the reduced decomposition and the pre-square remainder.
    """
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise ValueError("n2 identity needs 2x2 matrices")
    p = _params(q, c_shift)
    c, q = p.c, p.q
    s = kernels.index_sums(a, b)
    (a11, a12), (a21, a22) = a
    (b11, b12), (b21, b22) = b
    cj = np.conj
    sq = kernels.square_sum(a, b, q, c, p.eps1)
    cross_mod = abs(a11 * cj(b22) + a22 * cj(b11) - a12 * cj(b12) - a21 * cj(b21)) ** 2
    # same quantity from the index sums: D4 minus D0 weights minus the cross terms
    cross_expanded = (s["w4"] - s["w0"]) - (s["x1_jl"] + s["x2_ik"] - s["z"])
    reduced = (
        sq + c * cross_mod + c * s["w0"] + (c - 1 - q) * s["w1"] - c * s["z"]
        - s["y1"] - q * s["y2"] + (1 + q) * s["y3"]
    )
    rc = math.sqrt(max(c, 0.0))
    rd = math.sqrt(max(c - 1 - q, 0.0))
    remainder = (
        c * (abs(a11) ** 2 * abs(b11) ** 2 + abs(a22) ** 2 * abs(b22) ** 2)
        + (c - 1 - q) * (abs(a12) ** 2 * abs(b21) ** 2 + abs(a21) ** 2 * abs(b12) ** 2)
        - 2 * c * (a11 * cj(a22) * b11 * cj(b22)).real
        - 2 * (c - 1 - q) * (a12 * cj(a21) * b21 * cj(b12)).real
        + (1 - q) * (
            -a11 * cj(a21) * b11 * cj(b12) - a12 * cj(a22) * b21 * cj(b22)
            + a11 * cj(a12) * b11 * cj(b21) + a21 * cj(a22) * b12 * cj(b22)
        ).real
    )
    diagonal = abs(rc * a11 * b11 - rc * a22 * b22 + p.eps2 * (rd * a12 * b21 - rd * a21 * b12)) ** 2
    return {
        "direct": c * fro_norm_sq(a) * fro_norm_sq(b) - f_func(a, b, q),
        "square_sum": sq,
        "cross": c * cross_mod,
        "cross_mod": cross_mod,
        "cross_expanded": cross_expanded,
        "reduced": reduced,
        "remainder": remainder,
        "diagonal": diagonal,
        "scale": fro_norm_sq(a) * fro_norm_sq(b),
    }


def check_n2_identity(a=None, b=None, q=None, *, rng=None, trials=1000, qs=None, tol=1e-10,
                      c_shift=0.0) -> IdentityReport:
    """``c||A||^2||B||^2 - f`` equals the three squared groups, for 2x2 pairs.

    The residual is the worst of: the main identity, the cross-square
    expansion, the reduced decomposition and the remainder-as-square step.
    Each group must also be non-negative (to ``-1e-12`` relative).
    """
    if qs is None:
        qs = lemma1_grid(-3.0, 3.0, 0.25)

    def one(a_, b_, q_):
        g = n2_groups(a_, b_, q_, c_shift)
        sc = g["scale"]
        rs = {
            "total": _rel(g["direct"] - g["square_sum"] - g["cross"] - g["diagonal"], sc),
            "cross_expansion": _rel(_residual(g["cross_mod"], g["cross_expanded"]), sc),
            "reduced": _rel(_residual(g["direct"], g["reduced"]), sc),
            "remainder": _rel(g["direct"] - g["square_sum"] - g["cross"] - g["remainder"], sc),
            "remainder_square": _rel(g["remainder"] - g["diagonal"], sc),
        }
        neg = min(g["square_sum"], g["cross"], g["diagonal"]) / sc if sc > 0 else 0.0
        if neg < -1e-12:
            rs["negative_group"] = -neg
        key = max(rs, key=rs.get)
        return rs[key], key

    if a is not None:
        r, key = one(a, b, q)
        return IdentityReport("n2_identity", 1, r, tol, {"worst_part": key})

    def rows():
        for t in range(trials):
            q_ = qs[t % len(qs)]
            r, key = one(random_ginibre(2, rng), random_ginibre(2, rng), q_)
            yield r, {"q": q_, "part": key}
    return _worst("n2_identity", rows(), tol)


def normal_terms(diag, b, q: float, c_shift: float = 0.0) -> dict[str, float]:
    """Stages of the lower-bound chain for ``A = diag(a)``."""
    d = np.asarray(diag, dtype=np.complex128)
    b = as_matrix(b)
    n = d.shape[0]
    p = _params(q, c_shift)
    c, q = p.c, p.q
    s1, s2 = math.sqrt(max(c - 1, 0.0)), p.eps1 * math.sqrt(max(c - q, 0.0))
    na = float(np.sum(np.abs(d) ** 2))
    explicit = stage1 = stage2 = squares = 0.0
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            w = abs(b[j, i]) ** 2
            cross = (d[i] * np.conj(d[j])).real
            ai, aj = abs(d[i]) ** 2, abs(d[j]) ** 2
            explicit += w * (ai + q * aj - (1 + q) * cross)
            stage1 += w * (c * na - ai - q * aj + (1 + q) * cross)
            stage2 += w * ((c - 1) * ai + (c - q) * aj + (1 + q) * cross)
            squares += w * abs(s1 * d[i] + s2 * d[j]) ** 2
    return {
        "f": f_func(np.diag(d), b, q),
        "explicit": explicit,
        "gap": c * na * fro_norm_sq(b) - f_func(np.diag(d), b, q),
        "stage1": stage1,
        "stage2": stage2,
        "squares": squares,
        "scale": na * fro_norm_sq(b),
    }


def check_normal_reduction(diag=None, b=None, q=None, *, rng=None, trials=1000, ns=(2, 3, 5),
                           qs=DEFAULT_Q_GRID, tol=1e-12, c_shift=0.0) -> IdentityReport:
    """Explicit i != j formula for ``f(diag(a), B)`` and the chain ``gap >= stage1 >= stage2 = squares >= 0``.

    The residual is the worst of the formula mismatch, ``|stage2 - squares|``
    and any violated inequality in the chain.
    """
    def one(d, b_, q_):
        t = normal_terms(d, b_, q_, c_shift)
        sc = t["scale"]
        rs = {
            "formula": _rel(t["f"] - t["explicit"], sc),
            "square_identity": _rel(t["stage2"] - t["squares"], sc),
            "gap>=stage1": max(0.0, (t["stage1"] - t["gap"]) / sc if sc else 0.0),
            "stage1>=stage2": max(0.0, (t["stage2"] - t["stage1"]) / sc if sc else 0.0),
        }
        key = max(rs, key=rs.get)
        return rs[key], key

    if diag is not None:
        r, key = one(diag, b, q)
        return IdentityReport("normal_reduction", 1, r, tol, {"worst_part": key})

    def rows():
        combos = list(itertools.product(ns, qs))
        for t in range(trials):
            n, q_ = combos[t % len(combos)]
            d = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2)
            r, key = one(d, random_ginibre(n, rng), q_)
            yield r, {"n": n, "q": q_, "part": key}
    return _worst("normal_reduction", rows(), tol)


# -- bound sampling --------------------------------------------------------------


def _batch_f(a: np.ndarray, b: np.ndarray, q: float) -> np.ndarray:
    ba, ab = b @ a, a @ b
    return np.einsum("sij,sij->s", np.conj(ba - ab), ba - q * ab).real


def sample_bound(n: int, q: float, samples: int, rng: np.random.Generator, *, ensemble: str = "ginibre",
                 tol: float = 1e-9, chunk: int = 4096, c_shift: float = 0.0) -> IdentityReport:
    """Largest ``ratio(A, B, q) - c(q)`` over random pairs.

    `ensemble` picks `A`: ``"ginibre"`` or ``"normal"``; `B` is always
    Ginibre. A failing report carries the worst pair as text matrices.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if ensemble not in ("ginibre", "normal"):
        raise ValueError(f"unknown ensemble {ensemble!r}")
    c = _params(q, c_shift).c
    worst, worst_pair, done = -math.inf, None, 0
    while done < samples:
        m = min(chunk, samples - done)
        if ensemble == "normal":
            a = np.stack([random_normal_matrix(n, rng) for _ in range(m)])
        else:
            a = (rng.standard_normal((m, n, n)) + 1j * rng.standard_normal((m, n, n))) / math.sqrt(2)
        b = (rng.standard_normal((m, n, n)) + 1j * rng.standard_normal((m, n, n))) / math.sqrt(2)
        norms = np.einsum("sij,sij->s", np.conj(a), a).real * np.einsum("sij,sij->s", np.conj(b), b).real
        excess = _batch_f(a, b, q) / norms - c
        k = int(np.argmax(excess))
        if excess[k] > worst:
            worst, worst_pair = float(excess[k]), (a[k].copy(), b[k].copy())
        done += m
    details = {"n": n, "q": q, "ensemble": ensemble, "c": c}
    if worst > tol:
        from qcomm.matio import format_matrix

        details["A"] = format_matrix(worst_pair[0])
        details["B"] = format_matrix(worst_pair[1])
    return IdentityReport(f"sample_bound[{ensemble},n={n}]", samples, worst, tol, details)


# -- suite ---------------------------------------------------------------------


def _suite_entries(trials: int, samples: int, dense_q: bool):
    qs = tuple(lemma1_grid(-2.0, 3.0, 0.25)) if dense_q else DEFAULT_Q_GRID
    return {
        "index_partition": lambda rng, cs: [check_index_partition(6)],
        "lemma1": lambda rng, cs: [check_lemma1(lemma1_grid(-5, 5, 0.001 if dense_q else 0.01), c_shift=cs)],
        "combination": lambda rng, cs: [check_combination(rng, trials, qs=qs, c_shift=cs)],
        "lemma2": lambda rng, cs: [check_lemma2(rng, trials, qs=qs, c_shift=cs)],
        "decomposition": lambda rng, cs: [check_decomposition(rng=rng, trials=trials, qs=qs, c_shift=cs)],
        "n2_identity": lambda rng, cs: [check_n2_identity(rng=rng, trials=trials, c_shift=cs)],
        "normal_reduction": lambda rng, cs: [check_normal_reduction(rng=rng, trials=trials, qs=qs, c_shift=cs)],
        "witness": lambda rng, cs: [check_witness_decomposition(qs, c_shift=cs)],
        "sample_bound": lambda rng, cs: [
            sample_bound(2, q, samples, rng, c_shift=cs) for q in qs
        ] + [
            sample_bound(8, q, max(samples // 10, 1), rng, ensemble="normal", c_shift=cs) for q in qs
        ] + [
            sample_bound(n, q, max(samples // 10, 1), rng, c_shift=cs) for n in (3, 5) for q in qs
        ],
    }


CHECKS = (
    "index_partition", "lemma1", "combination", "lemma2", "decomposition",
    "n2_identity", "normal_reduction", "witness", "sample_bound",
)


def check_witness_decomposition(qs=DEFAULT_Q_GRID, ns=(2, 3, 4), tol=1e-10, c_shift=0.0) -> IdentityReport:
    """At the witness pair both sides of the decomposition and all 2x2 groups vanish."""
    def rows():
        for n in ns:
            for q in qs:
                w = make_witness(q, n)
                t = decomposition_terms(w.a, w.b, q, c_shift)
                sc = t["scale"]
                r = max(_rel(t["direct"], sc), _rel(abs(t["decomposition"]), sc))
                if n == 2:
                    g = n2_groups(w.a, w.b, q, c_shift)
                    r = max(r, *(_rel(g[k], sc) for k in ("square_sum", "cross", "diagonal")))
                yield r, {"n": n, "q": q}
    return _worst("witness", rows(), tol)


def run_suite(seed: int = 0, only: Iterable[str] | None = None, trials: int = 1000, samples: int = 100_000,
              dense_q: bool = False, c_shift: float = 0.0,
              on_report: Callable[[IdentityReport], None] | None = None) -> list[IdentityReport]:
    """Run the selected checks, each on its own child generator of `seed`."""
    entries = _suite_entries(trials, samples, dense_q)
    names = list(only) if only else list(CHECKS)
    unknown = [n for n in names if n not in entries]
    if unknown:
        raise ValueError(f"unknown checks: {unknown}; choose from {list(CHECKS)}")
    reports = []
    for name in names:
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(CHECKS.index(name),)))
        for rep in entries[name](rng, c_shift):
            reports.append(rep)
            if on_report:
                on_report(rep)
    return reports
