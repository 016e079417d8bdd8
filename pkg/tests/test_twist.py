import numpy as np
import pytest
from gmpy2 import mpq

from gl2aba.chain import ENTRIES
from gl2aba.kernel import random_rationals
from gl2aba.scalars import InvariantError, Mode, Q, max_abs
from gl2aba.twist import (TwistMatrix, check_trace_preservation, check_twisted_vacuum_action,
                          entry_formula_residual, general_twist_entry, general_twist_rtt_residual,
                          general_twist_trace_defect, random_invertible, random_twist,
                          twisted_entry, twisted_monodromy)

from conftest import chain


def dense_conjugation(model, k, u):
    """Oracle: (kappa x 1) T (kappa^-1 x 1) as a full 2*2^L matrix."""
    T = model.monodromy(u)
    full = np.block([[T[0][0], T[0][1]], [T[1][0], T[1][1]]])
    one = np.eye(model.dim, dtype=object) * mpq(1)
    K = np.kron(np.array(k.rows, dtype=object), one)
    Kinv = np.kron(np.array(k.inverse_rows, dtype=object), one)
    out = K.dot(full).dot(Kinv)
    n = model.dim
    return {"A": out[:n, :n], "B": out[:n, n:], "C": out[n:, :n], "D": out[n:, n:]}


def test_twist_invariants():
    with pytest.raises(InvariantError):
        TwistMatrix(2, 0, 0, 1)
    with pytest.raises(InvariantError):
        TwistMatrix(0, 1, -1, 0)
    k = TwistMatrix.from_rows([[2, 3], [1, 2]])
    assert TwistMatrix.from_json(k.to_json()) == k
    assert k.to_mode(Mode.FLOAT).mode is Mode.FLOAT


@pytest.mark.parametrize("L", [1, 2, 3])
def test_entries_match_dense_conjugation(L, rng):
    m = chain(L)
    for _ in range(3):
        k = random_twist(rng)
        u = random_rationals(rng, 1, 1, avoid=m.xi)[0]
        ref = dense_conjugation(m, k, u)
        for w in ENTRIES:
            assert max_abs(twisted_entry(m, k, w, u) - ref[w], m.mode) == 0
        assert entry_formula_residual(m, k, u) == 0


def test_identity_twist_is_untwisted(model3):
    u = Q(7, 3)
    for w in ENTRIES:
        assert (twisted_entry(model3, TwistMatrix.identity(), w, u) == model3.entry(w, u)).all()


def test_trace_and_vacuum_action(rng):
    for L in range(1, 6):
        m = chain(L)
        for _ in range(2):
            k = random_twist(rng)
            z = random_rationals(rng, 1, 1, avoid=m.xi)[0]
            assert check_trace_preservation(m, k, z) == 0
            assert check_twisted_vacuum_action(m, k, z) == (0, 0)


def test_vacuum_action_without_lower_left(rng, model3):
    k = random_twist(rng, generic=False)
    assert k.k21 == 0
    assert check_twisted_vacuum_action(model3, k, Q(5, 2)) == (0, 0)


def test_float_twist_on_exact_model(model3, kappa):
    fm = model3.as_float()
    r = check_trace_preservation(fm, kappa, 0.4 + 1.2j)
    assert r < 1e-12


def test_general_twist(rng, model3, kappa):
    u, v = Q(5, 2), Q(-7, 3)
    inv = kappa.inverse_rows
    for w in ENTRIES:
        assert (general_twist_entry(model3, kappa, inv, w, u) == twisted_entry(model3, kappa, w, u)).all()
        ident = [[1, 0], [0, 1]]
        assert (general_twist_entry(model3, ident, ident, w, u) == model3.entry(w, u)).all()
    k1, k2 = random_invertible(rng), random_invertible(rng)
    assert general_twist_rtt_residual(model3, k1, k2, u, v) == 0
    assert general_twist_trace_defect(model3, k1, k2, u) != 0
    with pytest.raises(InvariantError):
        general_twist_entry(model3, [[1, 2], [2, 4]], ident, "A", u)


def test_twisted_b_operators_commute(rng, model3, kappa):
    u, v = random_rationals(rng, 2, 1, avoid=model3.xi)
    Bu, Bv = twisted_entry(model3, kappa, "B", u), twisted_entry(model3, kappa, "B", v)
    assert max_abs(Bu @ Bv - Bv @ Bu, Mode.EXACT) == 0


def test_twisted_monodromy_is_conjugate(model3, kappa):
    T = twisted_monodromy(model3, kappa, Q(9, 4))
    assert max_abs(T[0][0] + T[1][1] - model3.transfer(Q(9, 4)), Mode.EXACT) == 0


def test_random_twist_unimodular(rng):
    for _ in range(20):
        k = random_twist(rng)
        assert k.k11 * k.k22 - k.k12 * k.k21 == 1
        assert k.k12 != 0 and k.k21 != 0
