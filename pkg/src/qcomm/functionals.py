"""The scalar functionals f and r, the constant c(q) and its witnesses."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from qcomm.errors import DegenerateInputError, DimensionError
from qcomm.matcore import _pair, dagger, fro_norm_sq

__all__ = [
    "QParams",
    "WitnessPair",
    "bound_c",
    "f_func",
    "f_trace",
    "make_witness",
    "r_func",
    "ratio",
]

NORM_FLOOR = 1e-300


@dataclass(frozen=True)
class QParams:
    """Deformation parameter `q` with its bound `c` and sign constants.

    ``eps1`` and ``eps2`` are the signs making
    ``2*eps1*sqrt((c-q)(c-1)) == q+1`` and ``2*eps2*sqrt(c(c-q-1)) == 1-q``.
    """

    q: float
    c: float
    eps1: int
    eps2: int

    @property
    def lemma_residuals(self) -> tuple[float, float]:
        q, c = self.q, self.c
        r1 = 2 * self.eps1 * math.sqrt(max((c - q) * (c - 1), 0.0)) - (q + 1)
        r2 = 2 * self.eps2 * math.sqrt(max(c * (c - q - 1), 0.0)) - (1 - q)
        return r1, r2


def bound_c(q: float) -> QParams:
    """``c(q) = ((1+q) + sqrt(2(1+q^2)))/2`` bundled with its sign constants."""
    q = float(q)
    if not math.isfinite(q):
        raise ValueError(f"q must be finite, got {q}")
    rad = 2.0 * (1.0 + q * q)
    # sqrt(4) == 2 exactly keeps c(1) == 2 and c(-1) == 1 bit-exact
    s = math.sqrt(rad) if math.isfinite(rad) else math.sqrt(2.0) * abs(q)
    c = ((1.0 + q) + s) / 2.0
    return QParams(q=q, c=c, eps1=1 if q >= -1 else -1, eps2=1 if q <= 1 else -1)


def f_func(a, b, q: float) -> float:
    """``Re <[B,A], [B,A]_q>`` with ``[X,Y]_q = XY - qYX``."""
    a, b = _pair(a, b)
    ba, ab = b @ a, a @ b
    return float(np.vdot(ba - ab, ba - q * ab).real)


def f_trace(a, b, q: float) -> float:
    """Trace expansion of :func:`f_func`; kept as an independent cross-check.

    ``tr(A*B*BA + q B*A*AB - (1+q)/2 (A*B*AB + B*A*BA))``
    """
    a, b = _pair(a, b)
    ad, bd = dagger(a), dagger(b)
    t = (
        np.trace(ad @ bd @ b @ a)
        + q * np.trace(bd @ ad @ a @ b)
        - 0.5 * (1 + q) * (np.trace(ad @ bd @ a @ b) + np.trace(bd @ ad @ b @ a))
    )
    return float(t.real)


def r_func(a, b) -> float:
    """``(<[B,A],BA> + <[B,A*],BA*>)/2``.

    The complex sum is real in exact arithmetic; an imaginary part above
    ``1e-12 ||A||^2 ||B||^2`` signals a bug and raises ``ArithmeticError``.
    """
    a, b = _pair(a, b)
    ad = dagger(a)
    ba, bad = b @ a, b @ ad
    z = 0.5 * (np.vdot(ba - a @ b, ba) + np.vdot(bad - ad @ b, bad))
    scale = fro_norm_sq(a) * fro_norm_sq(b)
    if abs(z.imag) > 1e-12 * scale:
        raise ArithmeticError(f"r-function has imaginary part {z.imag:.3e} (scale {scale:.3e})")
    return float(z.real)


def ratio(a, b, q: float) -> float:
    """``f(A,B;q) / (||A||^2 ||B||^2)`` for nonzero `a`, `b`."""
    a, b = _pair(a, b)
    na, nb = fro_norm_sq(a), fro_norm_sq(b)
    if na <= NORM_FLOOR or nb <= NORM_FLOOR:
        raise DegenerateInputError("ratio is undefined for a zero operand")
    # normalize first: keeps tiny/huge operands away from under/overflow
    return f_func(a / math.sqrt(na), b / math.sqrt(nb), q)


@dataclass(frozen=True)
class WitnessPair:
    a: np.ndarray
    b: np.ndarray
    params: QParams

    @property
    def ratio(self) -> float:
        return ratio(self.a, self.b, self.params.q)


def make_witness(q: float, n: int = 2) -> WitnessPair:
    """Pair attaining ``f = c(q) ||A||^2 ||B||^2``.

    ``A = diag(sqrt(c-1), -eps1 sqrt(c-q))`` and ``B = E_12`` in the top-left
    2x2 block, zero elsewhere.
    """
    if n < 2:
        raise DimensionError(f"witness needs n >= 2, got {n}")
    p = bound_c(q)
    a = np.zeros((n, n), dtype=np.complex128)
    b = np.zeros((n, n), dtype=np.complex128)
    a[0, 0] = math.sqrt(max(p.c - 1, 0.0))
    a[1, 1] = -p.eps1 * math.sqrt(max(p.c - p.q, 0.0))
    b[0, 1] = 1.0
    return WitnessPair(a, b, p)
