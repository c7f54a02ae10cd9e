import math

import numpy as np
import pytest

from qcomm.errors import DegenerateInputError
from qcomm.functionals import bound_c, f_func, make_witness
from qcomm.matcore import fro_norm_sq, random_ginibre, top_eigpair
from qcomm.optimizer import OptimizeConfig, lift_form_in_A, lift_form_in_B, optimize_cell


def E(i, j, n=2):
    m = np.zeros((n, n), dtype=complex)
    m[i, j] = 1
    return m


def test_lift_in_a_hand_value():
    h = lift_form_in_A(E(0, 1), 1.0)
    assert h(np.diag([1, -1])) == pytest.approx(4.0, abs=1e-14)


def test_lifts_match_f(rng):
    for _ in range(1000):
        n = int(rng.integers(1, 5))
        q = float(rng.uniform(-4, 4))
        a, b = random_ginibre(n, rng), random_ginibre(n, rng)
        f = f_func(a, b, q)
        scale = fro_norm_sq(a) * fro_norm_sq(b) * max(1, abs(q))
        assert abs(lift_form_in_A(b, q)(a) - f) <= 1e-12 * scale
        assert abs(lift_form_in_B(a, q)(b) - f) <= 1e-12 * scale


def test_lift_with_identity_vanishes(rng):
    for q in (-1.5, 0.0, 2.0):
        assert np.abs(lift_form_in_A(np.eye(3), q).matrix).max() <= 1e-12
        assert np.abs(lift_form_in_B(np.eye(3), q).matrix).max() <= 1e-12


def test_lift_rejects_zero():
    with pytest.raises(DegenerateInputError):
        lift_form_in_A(np.zeros((2, 2)), 0.5)
    with pytest.raises(DegenerateInputError):
        lift_form_in_B(np.zeros((2, 2)), 0.5)


@pytest.mark.parametrize("q", [-3.0, -1.0, 0.0, 0.4, 1.0, 2.5])
def test_witness_a_gives_top_eigenvalue_at_least_c(q):
    w = make_witness(q, 3)
    lam, _ = top_eigpair(lift_form_in_B(w.a, q))
    assert lam >= bound_c(q).c * fro_norm_sq(w.a) - 1e-10


@pytest.mark.parametrize("q, expected", [(1.0, 2.0), (0.0, (1 + math.sqrt(2)) / 2)])
def test_n2_known_constants(q, expected):
    res = optimize_cell(OptimizeConfig(n=2, q=q, restarts=8, seed=3))
    assert abs(res.best_ratio - expected) <= 1e-6


def test_n5_q_half():
    res = optimize_cell(OptimizeConfig(n=5, q=0.5, seed=11))
    assert abs(res.best_ratio - (1.5 + math.sqrt(2.5)) / 2) <= 1e-6


def test_random_restarts_alone_reach_c():
    # no witness seeding: the ascent itself must find the optimum
    res = optimize_cell(OptimizeConfig(n=4, q=0.25, restarts=6, seed=5, witness_seed=False))
    assert abs(res.best_ratio - bound_c(0.25).c) <= 1e-6


def test_result_invariants():
    res = optimize_cell(OptimizeConfig(n=3, q=-0.7, restarts=5, seed=2), keep_trace=True)
    assert fro_norm_sq(res.a_opt) == pytest.approx(1, abs=1e-12)
    assert fro_norm_sq(res.b_opt) == pytest.approx(1, abs=1e-12)
    assert res.best_ratio == pytest.approx(f_func(res.a_opt, res.b_opt, -0.7), abs=1e-12)
    assert res.best_ratio <= bound_c(-0.7).c + 1e-6
    assert not res.violation
    assert res.restarts_used == 5 and res.converged
    for info in res.restarts:
        t = np.array(info.trace)
        assert len(t) == 2 * info.iterations
        assert np.all(np.diff(t) >= -1e-12)


def test_witness_seeded_restart():
    for q in (-2.0, 0.0, 1.0, 3.0):
        res = optimize_cell(OptimizeConfig(n=4, q=q, restarts=1, seed=0))
        assert res.restarts[0].witness_seeded
        assert res.best_ratio >= bound_c(q).c - 1e-10


def test_deterministic():
    cfg = OptimizeConfig(n=4, q=0.8, restarts=4, seed=99)
    r1, r2 = optimize_cell(cfg, keep_trace=True), optimize_cell(cfg, keep_trace=True)
    assert r1.best_ratio == r2.best_ratio
    assert [i.trace for i in r1.restarts] == [i.trace for i in r2.restarts]
    assert np.array_equal(r1.a_opt, r2.a_opt)


def test_max_iters_caps_without_convergence():
    res = optimize_cell(OptimizeConfig(n=5, q=0.1, restarts=2, max_iters=1, seed=1, witness_seed=False))
    assert all(i.iterations == 1 for i in res.restarts)


def test_config_validation():
    for bad in (dict(n=1, q=0), dict(n=2, q=0, restarts=0), dict(n=2, q=0, tol=0), dict(n=2, q=float("nan"))):
        with pytest.raises(ValueError):
            OptimizeConfig(**bad)


def test_eigensolver_failure_is_recorded(monkeypatch):
    from qcomm import optimizer
    from qcomm.errors import EigenSolverError

    calls = {"n": 0}
    real = optimizer.top_eigpair

    def flaky(h):
        calls["n"] += 1
        if calls["n"] == 1:
            raise EigenSolverError("injected")
        return real(h)

    monkeypatch.setattr(optimizer, "top_eigpair", flaky)
    res = optimize_cell(OptimizeConfig(n=2, q=0.0, restarts=3, seed=0))
    assert res.restarts[0].error == "injected"
    assert res.restarts_used == 2
    assert res.diagnostics == ["restart 0: injected"]
    assert abs(res.best_ratio - bound_c(0.0).c) <= 1e-6
