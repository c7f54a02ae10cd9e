# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; mirror of ``qcomm._pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()

SUM_NAMES = (
    "w0", "w1", "w2", "w3", "w4",
    "x1", "x1_jl", "x2", "x2_ik", "x3", "x3_ik",
    "y1", "y2", "y3", "z",
)


cdef inline int _index_class(Py_ssize_t i, Py_ssize_t j, Py_ssize_t k, Py_ssize_t l) noexcept nogil:
    if j == k and l == i and i != j:
        return 1
    if l == i and j != k:
        return 2
    if k == j and i != l:
        return 3
    return 4


def index_class(i, j, k, l):
    return _index_class(i, j, k, l)


cdef inline double complex _cj(double complex x) noexcept nogil:
    return x.conjugate()


cdef inline double _abs2(double complex x) noexcept nogil:
    return x.real * x.real + x.imag * x.imag


def index_sums(a, b):
    cdef double complex[:, ::1] A = np.ascontiguousarray(a, dtype=np.complex128)
    cdef double complex[:, ::1] B = np.ascontiguousarray(b, dtype=np.complex128)
    cdef Py_ssize_t n = A.shape[0]
    cdef Py_ssize_t i, j, k, l
    cdef double w[5]
    cdef double complex x1 = 0, x1_jl = 0, x2 = 0, x2_ik = 0, z = 0, y1 = 0, y2 = 0
    cdef double x3 = 0, x3_ik = 0, y3 = 0, wt
    cdef double complex t1, t2
    cdef double t3
    for i in range(5):
        w[i] = 0
    with nogil:
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for l in range(n):
                        wt = _abs2(A[i, j]) * _abs2(B[k, l])
                        w[_index_class(i, j, k, l)] += wt
                        if i == j and j == k and k == l:
                            w[0] += wt
                        t1 = A[i, j] * _cj(A[k, j]) * B[l, i] * _cj(B[l, k])
                        t2 = A[i, j] * _cj(A[i, l]) * B[j, k] * _cj(B[l, k])
                        t3 = (A[i, j] * _cj(A[l, k]) * B[j, k] * _cj(B[i, l])).real
                        if i != k:
                            x1 += t1
                            x3_ik += t3
                            if j != l:
                                x1_jl += t1
                                x2_ik += t2
                                z += A[i, j] * _cj(A[k, l]) * B[j, i] * _cj(B[l, k])
                        if j != l:
                            x2 += t2
                        if not (i == j and j == k and k == l):
                            x3 += t3
        for i in range(n):
            for j in range(n):
                for l in range(n):
                    if i != l:
                        y1 += A[i, j] * _cj(A[l, j]) * B[j, i] * _cj(B[j, l])
                    if j != l:
                        y2 += A[i, j] * _cj(A[i, l]) * B[j, i] * _cj(B[l, i])
                    if not (i == j and j == l):
                        y3 += (A[i, j] * _cj(A[l, i]) * B[j, i] * _cj(B[i, l])).real
    vals = (w[0], w[1], w[2], w[3], w[4], x1, x1_jl, x2, x2_ik, x3, x3_ik, y1, y2, y3, z)
    return dict(zip(SUM_NAMES, vals))


def square_sum(a, b, double q, double c, int eps1):
    cdef double complex[:, ::1] A = np.ascontiguousarray(a, dtype=np.complex128)
    cdef double complex[:, ::1] B = np.ascontiguousarray(b, dtype=np.complex128)
    cdef Py_ssize_t n = A.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double s1 = sqrt(c - q) if c > q else 0.0
    cdef double s2 = eps1 * (sqrt(c - 1) if c > 1 else 0.0)
    cdef double total = 0
    cdef double complex ab, ba
    with nogil:
        for i in range(n):
            for k in range(n):
                if i == k:
                    continue
                ab = 0
                ba = 0
                for j in range(n):
                    ab = ab + A[i, j] * B[j, k]
                    ba = ba + A[j, k] * B[i, j]
                total += _abs2(s1 * ab + s2 * ba)
    return total


def lift_a(b, double q):
    cdef double complex[:, ::1] B = np.ascontiguousarray(b, dtype=np.complex128)
    return _lift(B, q, 0)


def lift_b(a, double q):
    cdef double complex[:, ::1] A = np.ascontiguousarray(a, dtype=np.complex128)
    return _lift(A, q, 1)


cdef _lift(double complex[:, ::1] M, double q, int which):
    # vec index of entry (i, j) is i + n*j
    cdef Py_ssize_t n = M.shape[0]
    cdef Py_ssize_t i, j, ip, jp, s
    cdef double half = 0.5 * (1 + q)
    cdef double complex[:, ::1] G = np.zeros((n, n), dtype=np.complex128)   # M^* M
    cdef double complex[:, ::1] P = np.zeros((n, n), dtype=np.complex128)   # M M^*
    out = np.zeros((n * n, n * n), dtype=np.complex128)
    cdef double complex[:, ::1] H = out
    cdef double complex acc, term
    with nogil:
        for i in range(n):
            for j in range(n):
                acc = 0
                for s in range(n):
                    acc = acc + _cj(M[s, i]) * M[s, j]
                G[i, j] = acc
                acc = 0
                for s in range(n):
                    acc = acc + M[i, s] * _cj(M[j, s])
                P[i, j] = acc
        for j in range(n):
            for i in range(n):
                for jp in range(n):
                    for ip in range(n):
                        if which == 0:
                            # I (x) B^*B + q (BB^*)^T (x) I - (1+q)/2 (B^T (x) B^* + conj(B) (x) B)
                            term = -half * (M[jp, j] * _cj(M[ip, i]) + _cj(M[j, jp]) * M[i, ip])
                            if j == jp:
                                term = term + G[i, ip]
                            if i == ip:
                                term = term + q * P[jp, j]
                        else:
                            # (AA^*)^T (x) I + q I (x) A^*A - (1+q)/2 (conj(A) (x) A + A^T (x) A^*)
                            term = -half * (_cj(M[j, jp]) * M[i, ip] + M[jp, j] * _cj(M[ip, i]))
                            if i == ip:
                                term = term + P[jp, j]
                            if j == jp:
                                term = term + q * G[i, ip]
                        H[i + n * j, ip + n * jp] = term
    return out
