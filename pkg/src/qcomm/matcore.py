"""Dense complex matrix kernel.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; :func:`as_matrix`
is the single validation point (square, finite).

Vectorization uses column stacking throughout: entry ``(i, j)`` of an
``n x n`` matrix lands at index ``i + n*j`` of ``vec(A)``. Under this
convention ``vec(X @ A @ Y) == kron(Y.T, X) @ vec(A)`` and hence
``tr(A^* X A Y) == vec(A)^* kron(Y.T, X) vec(A)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from qcomm.errors import DimensionError, EigenSolverError

__all__ = [
    "HermitianForm",
    "as_matrix",
    "commutator",
    "dagger",
    "fro_norm_sq",
    "hs_inner",
    "q_commutator",
    "random_ginibre",
    "random_normal_matrix",
    "random_unitary",
    "top_eigpair",
    "unit",
    "unvec",
    "vec",
]


def as_matrix(a) -> np.ndarray:
    """Return `a` as a square, finite ``complex128`` array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimensionError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def _pair(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a, b


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(a).T


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product ``tr(A^* B)``, conjugate-linear in `a`."""
    a, b = _pair(a, b)
    return complex(np.vdot(a, b))


def fro_norm_sq(a) -> float:
    """Squared Frobenius norm ``tr(A^* A)``."""
    a = as_matrix(a)
    return float(np.vdot(a, a).real)


def commutator(a, b) -> np.ndarray:
    """``AB - BA``."""
    a, b = _pair(a, b)
    return a @ b - b @ a


def q_commutator(a, b, q: float) -> np.ndarray:
    """q-deformed commutator ``AB - q BA``."""
    a, b = _pair(a, b)
    return a @ b - q * (b @ a)


def vec(a) -> np.ndarray:
    """Column-stacking vectorization."""
    return as_matrix(a).reshape(-1, order="F")


def unvec(v, n: int) -> np.ndarray:
    """Inverse of :func:`vec`."""
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 1 or v.shape[0] != n * n:
        raise DimensionError(f"vector of length {v.shape} cannot be reshaped to {n}x{n}")
    return v.reshape((n, n), order="F")


def unit(a: np.ndarray) -> np.ndarray:
    """Rescale to unit Frobenius norm."""
    return a / np.sqrt(fro_norm_sq(a))


@dataclass(frozen=True)
class HermitianForm:
    """Hermitian matrix acting on vectorized ``n x n`` matrices.

    The stored matrix is symmetrized as ``(H + H^*)/2`` on construction, so
    it is Hermitian to the last bit regardless of rounding in assembly.
    """

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        h = np.asarray(self.matrix, dtype=np.complex128)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise DimensionError(f"form must be square, got shape {h.shape}")
        object.__setattr__(self, "matrix", 0.5 * (h + dagger(h)))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __call__(self, a) -> float:
        """Evaluate ``vec(A)^* H vec(A)`` for a matrix `a`."""
        v = vec(a)
        if v.shape[0] != self.dim:
            raise DimensionError(f"matrix of size {v.shape[0]} does not fit form of dim {self.dim}")
        return float(np.vdot(v, self.matrix @ v).real)


def top_eigpair(h: HermitianForm) -> tuple[float, np.ndarray]:
    """Largest eigenvalue of `h` and a unit eigenvector for it.

    Uses the dense LAPACK solver restricted to the top index. The returned
    pair is checked against ``||Hv - lv|| <= 1e-10 ||H||``; anything worse
    raises :class:`EigenSolverError`.
    """
    m = h.matrix if isinstance(h, HermitianForm) else HermitianForm(h).matrix
    dim = m.shape[0]
    if not np.all(np.isfinite(m)):
        raise EigenSolverError("form has non-finite entries")
    try:
        w, v = scipy.linalg.eigh(m, subset_by_index=[dim - 1, dim - 1], driver="evr")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigenSolverError(f"dense eigensolver failed: {exc}") from exc
    lam = float(w[-1])
    x = v[:, -1]
    x = x / np.linalg.norm(x)
    scale = np.linalg.norm(m)
    resid = np.linalg.norm(m @ x - lam * x)
    if not np.isfinite(lam) or resid > 1e-10 * max(scale, np.finfo(float).tiny):
        raise EigenSolverError(f"eigenpair residual {resid:.3e} exceeds tolerance (|H| = {scale:.3e})")
    return lam, x


def random_ginibre(n: int, rng: np.random.Generator) -> np.ndarray:
    """n x n matrix of i.i.d. standard complex Gaussians (``E|z|^2 = 1``)."""
    if n < 1:
        raise ValueError("n must be positive")
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a Ginibre sample with phase-fixed R."""
    q, r = np.linalg.qr(random_ginibre(n, rng))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_normal_matrix(n: int, rng: np.random.Generator) -> np.ndarray:
    """``U diag(z) U^*`` with Haar `U` and standard complex Gaussian `z`."""
    u = random_unitary(n, rng)
    z = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)
    return (u * z) @ dagger(u)
