import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcomm.errors import DegenerateInputError, DimensionError
from qcomm.functionals import bound_c, f_func, f_trace, make_witness, r_func, ratio
from qcomm.matcore import commutator, fro_norm_sq, random_ginibre, random_normal_matrix, random_unitary

seeds = st.integers(0, 2**32 - 1)
qs = st.floats(-10, 10, allow_nan=False)


def E(i, j, n=2):
    m = np.zeros((n, n), dtype=complex)
    m[i, j] = 1
    return m


def test_bound_c_special_values():
    assert bound_c(1).c == 2
    assert bound_c(0).c == pytest.approx((1 + math.sqrt(2)) / 2, abs=1e-15)
    assert bound_c(-1).c == 1


@pytest.mark.parametrize("q, eps1, eps2", [(-3, -1, 1), (-1, 1, 1), (0, 1, 1), (1, 1, 1), (1.5, 1, -1)])
def test_sign_constants(q, eps1, eps2):
    p = bound_c(q)
    assert (p.eps1, p.eps2) == (eps1, eps2)


@settings(max_examples=300, deadline=None)
@given(q=st.floats(-1e6, 1e6, allow_nan=False).filter(lambda q: min(abs(q - 1), abs(q + 1)) >= 5e-3 or abs(q) == 1))
def test_qparams_invariants(q):
    # within ~1e-3 of q = +-1 one radicand is ~(1 -+ q)^2 and the rounding of c
    # alone swamps 1e-12; the exact points themselves are covered
    p = bound_c(q)
    assert p.c >= max(1.0, q, 1.0 + q) - 1e-12 * max(1, abs(q))
    r1, r2 = p.lemma_residuals
    assert max(abs(r1), abs(r2)) <= 1e-12 * max(1, abs(q))


def test_bound_c_rejects_nonfinite():
    with pytest.raises(ValueError):
        bound_c(float("nan"))
    with pytest.raises(ValueError):
        bound_c(float("inf"))


def test_f_examples(rng):
    assert f_func(np.diag([1, -1]), E(0, 1), 1) == 4
    b = random_ginibre(3, rng)
    for q in (-2, 0, 0.7, 3):
        assert abs(f_func(np.eye(3), b, q)) <= 1e-13
    a = random_ginibre(4, rng)
    b = random_ginibre(4, rng)
    assert f_func(a, b, 1) == pytest.approx(fro_norm_sq(commutator(a, b)), rel=1e-12)


def test_f_forms_agree(rng):
    for _ in range(300):
        n = int(rng.integers(1, 6))
        q = float(rng.uniform(-5, 5))
        a, b = random_ginibre(n, rng), random_ginibre(n, rng)
        scale = fro_norm_sq(a) * fro_norm_sq(b)
        assert abs(f_func(a, b, q) - f_trace(a, b, q)) <= 1e-12 * scale


def test_f_dimension_mismatch():
    with pytest.raises(DimensionError):
        f_func(np.eye(2), np.eye(3), 0.5)


def test_r_examples(rng):
    a, b = random_ginibre(3, rng), random_ginibre(3, rng)
    scale = fro_norm_sq(a) * fro_norm_sq(b)
    expected = (f_func(a, b, 0) + f_func(a.conj().T, b, 0)) / 2
    assert abs(r_func(a, b) - expected) <= 1e-12 * scale
    nb = random_normal_matrix(3, rng)
    assert abs(r_func(a, nb) - 0.5 * fro_norm_sq(commutator(a, nb))) <= 1e-12 * fro_norm_sq(a) * fro_norm_sq(nb)
    assert abs(r_func(a, np.eye(3))) <= 1e-13


def test_r_realness(rng):
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 5))
        a, b = random_ginibre(n, rng), random_ginibre(n, rng)
        ad = a.conj().T
        z = 0.5 * (np.vdot(b @ a - a @ b, b @ a) + np.vdot(b @ ad - ad @ b, b @ ad))
        worst = max(worst, abs(z.imag) / (fro_norm_sq(a) * fro_norm_sq(b)))
    assert worst <= 1e-12


def test_witness_q1():
    w = make_witness(1.0)
    assert np.array_equal(w.a, np.diag([1, -1]))
    assert np.array_equal(w.b, E(0, 1))
    assert f_func(w.a, w.b, 1) == 4


def test_witness_q0():
    w = make_witness(0.0)
    c = (1 + math.sqrt(2)) / 2
    assert fro_norm_sq(w.a) == pytest.approx(2 * c - 1, rel=1e-15)
    assert fro_norm_sq(w.a) == pytest.approx(math.sqrt(2), rel=1e-15)
    assert f_func(w.a, w.b, 0) == pytest.approx(c * math.sqrt(2), rel=1e-14)


def test_witness_boundary_q_minus_1():
    w = make_witness(-1.0, 3)
    assert w.a[0, 0] == 0
    assert w.a[1, 1] == pytest.approx(-math.sqrt(2))
    assert w.ratio == pytest.approx(1.0, rel=1e-15)


@pytest.mark.parametrize("n", [2, 3, 6])
def test_witness_ratio_any_q(rng, n):
    for q in rng.uniform(-20, 20, 25):
        w = make_witness(q, n)
        assert abs(w.ratio - w.params.c) <= 1e-12 * w.params.c


def test_witness_needs_n2():
    with pytest.raises(DimensionError):
        make_witness(0.5, 1)


def test_ratio_degenerate():
    with pytest.raises(DegenerateInputError):
        ratio(np.zeros((2, 2)), np.eye(2), 0.3)
    with pytest.raises(DegenerateInputError):
        ratio(np.eye(2), 1e-200 * np.eye(2), 0.3)


def test_ratio_self_commutator(rng):
    a = random_ginibre(3, rng)
    assert abs(ratio(a, a, 1)) <= 1e-14


@settings(max_examples=60, deadline=None)
@given(seed=seeds, n=st.integers(1, 5), q=qs)
def test_unitary_invariance(seed, n, q):
    rng = np.random.default_rng(seed)
    a, b, u = random_ginibre(n, rng), random_ginibre(n, rng), random_unitary(n, rng)
    ud = u.conj().T
    scale = fro_norm_sq(a) * fro_norm_sq(b) * max(1, abs(q))
    assert abs(f_func(u @ a @ ud, u @ b @ ud, q) - f_func(a, b, q)) <= 1e-11 * scale


@settings(max_examples=60, deadline=None)
@given(seed=seeds, n=st.integers(1, 5), q=qs)
def test_scaling_covariance(seed, n, q):
    rng = np.random.default_rng(seed)
    a, b = random_ginibre(n, rng), random_ginibre(n, rng)
    alpha, beta = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
    lhs = f_func(alpha * a, beta * b, q)
    rhs = abs(alpha) ** 2 * abs(beta) ** 2 * f_func(a, b, q)
    scale = abs(alpha) ** 2 * abs(beta) ** 2 * fro_norm_sq(a) * fro_norm_sq(b) * max(1, abs(q))
    assert abs(lhs - rhs) <= 1e-12 * scale
    if n >= 2 and fro_norm_sq(a) > 0:
        assert ratio(alpha * a, beta * b, q) == pytest.approx(ratio(a, b, q), abs=1e-12 * max(1, abs(q)))


@settings(max_examples=60, deadline=None)
@given(seed=seeds, n=st.integers(1, 5))
def test_q_minus_1_closed_form(seed, n):
    rng = np.random.default_rng(seed)
    a, b = random_ginibre(n, rng), random_ginibre(n, rng)
    closed = fro_norm_sq(b @ a) - fro_norm_sq(a @ b)
    assert abs(f_func(a, b, -1) - closed) <= 1e-12 * fro_norm_sq(a) * fro_norm_sq(b)


@settings(max_examples=100, deadline=None)
@given(seed=seeds, n=st.integers(2, 7), q=qs)
def test_bound_holds_for_normal_a(seed, n, q):
    rng = np.random.default_rng(seed)
    a, b = random_normal_matrix(n, rng), random_ginibre(n, rng)
    scale = fro_norm_sq(a) * fro_norm_sq(b)
    assert f_func(a, b, q) <= bound_c(q).c * scale + 1e-10 * scale


@settings(max_examples=100, deadline=None)
@given(seed=seeds, q=qs)
def test_bound_holds_for_n2(seed, q):
    rng = np.random.default_rng(seed)
    a, b = random_ginibre(2, rng), random_ginibre(2, rng)
    scale = fro_norm_sq(a) * fro_norm_sq(b)
    assert f_func(a, b, q) <= bound_c(q).c * scale + 1e-10 * scale
