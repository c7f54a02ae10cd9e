"""Pure-Python reference kernels.

Same interface as the compiled ``_ckernels`` module. Index sums are plain
loops over the index quadruples so that each sum reads like its definition;
the compiled module runs the identical loops in C.
"""

import numpy as np

SUM_NAMES = (
    "w0", "w1", "w2", "w3", "w4",
    "x1", "x1_jl", "x2", "x2_ik", "x3", "x3_ik",
    "y1", "y2", "y3", "z",
)


def index_class(i, j, k, l):
    """1, 2, 3 or 4: the one of D1..D4 that contains (i, j, k, l)."""
    if j == k and l == i and i != j:
        return 1
    if l == i and j != k:
        return 2
    if k == j and i != l:
        return 3
    return 4


def index_sums(a, b):
    """Raw quartic index sums of the entries of `a` and `b`.

    Keys (indices 0-based, ``~`` is complex conjugation):

    ``w0..w4``  sum over D0..D4 of ``|a_ij|^2 |b_kl|^2``
    ``x1``      sum, i != k, of ``a_ij ~a_kj b_li ~b_lk``; ``x1_jl`` adds j != l
    ``x2``      sum, j != l, of ``a_ij ~a_il b_jk ~b_lk``; ``x2_ik`` adds i != k
    ``x3``      sum, not i=j=k=l, of ``Re(a_ij ~a_lk b_jk ~b_il)``; ``x3_ik`` is i != k
    ``y1``      sum, i != k, of ``a_ij ~a_kj b_ji ~b_jk``
    ``y2``      sum, j != l, of ``a_ij ~a_il b_ji ~b_li``
    ``y3``      sum, not i=j=l, of ``Re(a_ij ~a_li b_ji ~b_il)``
    ``z``       sum, i != k and j != l, of ``a_ij ~a_kl b_ji ~b_lk``
    """
    a = np.asarray(a, dtype=np.complex128).tolist()
    b = np.asarray(b, dtype=np.complex128).tolist()
    n = len(a)
    ac = [[x.conjugate() for x in row] for row in a]
    bc = [[x.conjugate() for x in row] for row in b]
    a2 = [[abs(x) ** 2 for x in row] for row in a]
    b2 = [[abs(x) ** 2 for x in row] for row in b]
    w = [0.0] * 5
    x1 = x1_jl = x2 = x2_ik = z = 0j
    x3 = x3_ik = 0.0
    r = range(n)
    for i in r:
        for j in r:
            for k in r:
                for l in r:
                    wt = a2[i][j] * b2[k][l]
                    w[index_class(i, j, k, l)] += wt
                    if i == j == k == l:
                        w[0] += wt
                    t1 = a[i][j] * ac[k][j] * b[l][i] * bc[l][k]
                    t2 = a[i][j] * ac[i][l] * b[j][k] * bc[l][k]
                    t3 = (a[i][j] * ac[l][k] * b[j][k] * bc[i][l]).real
                    if i != k:
                        x1 += t1
                        x3_ik += t3
                        if j != l:
                            x1_jl += t1
                            x2_ik += t2
                            z += a[i][j] * ac[k][l] * b[j][i] * bc[l][k]
                    if j != l:
                        x2 += t2
                    if not (i == j == k == l):
                        x3 += t3
    y1 = y2 = 0j
    y3 = 0.0
    for i in r:
        for j in r:
            for l in r:
                if i != l:
                    y1 += a[i][j] * ac[l][j] * b[j][i] * bc[j][l]
                if j != l:
                    y2 += a[i][j] * ac[i][l] * b[j][i] * bc[l][i]
                if not (i == j == l):
                    y3 += (a[i][j] * ac[l][i] * b[j][i] * bc[i][l]).real
    vals = (*w, x1, x1_jl, x2, x2_ik, x3, x3_ik, y1, y2, y3, z)
    return dict(zip(SUM_NAMES, vals))


def square_sum(a, b, q, c, eps1):
    """``sum_{i != k} |sqrt(c-q) (AB)_ik + eps1 sqrt(c-1) (BA)_ik|^2`` by loops."""
    a = np.asarray(a, dtype=np.complex128).tolist()
    b = np.asarray(b, dtype=np.complex128).tolist()
    n = len(a)
    s1 = max(c - q, 0.0) ** 0.5
    s2 = eps1 * max(c - 1, 0.0) ** 0.5
    total = 0.0
    for i in range(n):
        for k in range(n):
            if i == k:
                continue
            ab = 0j
            ba = 0j
            for j in range(n):
                ab += a[i][j] * b[j][k]
                ba += a[j][k] * b[i][j]
            total += abs(s1 * ab + s2 * ba) ** 2
    return total


def lift_a(b, q):
    """Hermitian H with ``vec(A)^* H vec(A) = f(A, B; q)`` (column-stacked vec)."""
    b = np.asarray(b, dtype=np.complex128)
    n = b.shape[0]
    eye = np.eye(n)
    bd = b.conj().T
    h = np.kron(eye, bd @ b) + q * np.kron((b @ bd).T, eye)
    h -= 0.5 * (1 + q) * (np.kron(b.T, bd) + np.kron(b.conj(), b))
    return h


def lift_b(a, q):
    """Hermitian K with ``vec(B)^* K vec(B) = f(A, B; q)`` (column-stacked vec)."""
    a = np.asarray(a, dtype=np.complex128)
    n = a.shape[0]
    eye = np.eye(n)
    ad = a.conj().T
    k = np.kron((a @ ad).T, eye) + q * np.kron(eye, ad @ a)
    k -= 0.5 * (1 + q) * (np.kron(a.conj(), a) + np.kron(a.T, ad))
    return k
