import pytest
from gmpy2 import mpq

from gl2aba.bethe import solve_bethe
from gl2aba.chain import SpinChainModel
from gl2aba.expansion import (OffShellError, act_C_on_bethe, act_diag_on_bethe,
                              check_lambda_sum, check_onshell_collapse,
                              check_twisted_offshell_action, direct_action,
                              lambda_contribution, twisted_b_expansion)
from gl2aba.kernel import random_rationals
from gl2aba.scalars import InvariantError, Mode, Q, max_abs
from gl2aba.twist import TwistMatrix, random_twist, twisted_bethe_state

from conftest import chain

UPPER = TwistMatrix.from_rows([[1, 1], [0, 1]])


def zeros_like_vacuum(m):
    return 0 * m.vacuum()


def test_single_site_examples():
    m = SpinChainModel((0,), 1)
    cm = act_diag_on_bethe(m, "A", Q(3), [Q(1)])
    # W = (z, u): key (1,) is B(1)|0>, key (0,) is B(3)|0>
    assert cm.entries == {(1,): Q(2, 3), (0,): 1}
    assert list(cm.evaluate(m)) == [0, 1]
    assert (cm.evaluate(m) == direct_action(m, "A", Q(3), [Q(1)])).all()
    cc = act_C_on_bethe(m, Q(3), [Q(1)])
    assert cc.entries == {(): Q(1, 3)}


def test_empty_actions(model3):
    z = Q(7, 2)
    assert act_diag_on_bethe(model3, "A", z, []).entries == {(): model3.a(z)}
    assert act_diag_on_bethe(model3, "D", z, []).entries == {(): 1}
    assert act_C_on_bethe(model3, z, []).entries == {}


@pytest.mark.parametrize("L", [2, 3, 4, 5])
def test_actions_match_operator_products(L, rng):
    m = chain(L)
    for n in range(0, min(L, 3) + 1):
        z, *U = random_rationals(rng, n + 1, 1, avoid=m.xi)
        for w in "AD":
            got = act_diag_on_bethe(m, w, z, U).evaluate(m)
            assert max_abs(got - direct_action(m, w, z, U), m.mode) == 0
        got = act_C_on_bethe(m, z, U).evaluate(m)
        assert max_abs(got - direct_action(m, "C", z, U), m.mode) == 0


def test_twisted_offshell_action(rng):
    m = chain(3)
    for _ in range(3):
        k = random_twist(rng)
        z, *U = random_rationals(rng, 3, 1, avoid=m.xi)
        assert check_twisted_offshell_action(m, k, z, U) == (0, 0)
    z, *U = random_rationals(rng, 3, 1, avoid=m.xi)
    assert check_twisted_offshell_action(m, random_twist(rng, generic=False), z, U) == (0, 0)


def test_expansion_n1_has_three_terms(model3, kappa):
    u = Q(5, 3)
    cm = twisted_b_expansion(model3, kappa, [u])
    assert len(cm.terms) == 3
    assert cm.entries[()] == kappa.k11 * kappa.k12 * (model3.d(u) - model3.a(u))
    assert cm.entries[(0,)] == kappa.k11 ** 2
    rows = cm.table()
    assert [r["prefactor"] for r in rows] == ["+ k11 k12", "- k11 k12", "+ k11^2"]
    assert [r["coefficient"] for r in rows] == ["1/1", str(model3.a(u)), "1/1"]
    for t in cm.terms:
        assert t.value == t.sign * kappa.k11 ** t.k11_power * kappa.k12 ** t.k12_power * t.scalar


@pytest.mark.parametrize("L", [1, 2, 3, 4])
def test_expansion_matches_direct_product(L, rng):
    m = chain(L)
    for n in range(1, min(L, 3) + 1):
        for _ in range(2):
            k = random_twist(rng)
            U = random_rationals(rng, n, 1, avoid=m.xi)
            cm = twisted_b_expansion(m, k, U)
            assert len(cm.terms) == 3 ** n
            assert max_abs(cm.evaluate(m) - twisted_bethe_state(m, k, U), m.mode) == 0


def test_expansion_rejects_diagonal_corner(model3):
    with pytest.raises(InvariantError):
        twisted_b_expansion(model3, TwistMatrix.from_rows([[2, 0], [3, mpq(1, 2)]]), [Q(3)])


def test_homogeneous_collapse_exact(homogeneous2):
    u = Q(-1, 2)
    assert homogeneous2.a(u) == 1
    cm = twisted_b_expansion(homogeneous2, UPPER, [u])
    assert cm.entries[()] == 0
    rep = check_onshell_collapse(homogeneous2, UPPER, [u])
    assert rep.residual == 0 and rep.constant == 1 and rep.subleading_max == 0


def test_collapse_with_no_roots(model3, kappa):
    rep = check_onshell_collapse(model3, kappa, [])
    assert rep.residual == 0 and rep.constant == 1


def test_collapse_on_solver_roots():
    m = SpinChainModel((mpq(0), mpq(1, 7), mpq(-1, 5), mpq(2, 9)), 1)
    fm = m.as_float()
    k = TwistMatrix.from_rows([[Q(3, 2), Q(-1, 3)], [2, Q(2, 9)]])
    sols = solve_bethe(m, 2, seeds=30)
    assert len(sols) >= 1
    for br in sols:
        rep = check_onshell_collapse(fm, k, br)
        assert rep.residual <= 1e-8
        assert rep.constant_error <= 1e-8
        assert rep.subleading_max <= 1e-8


def test_offshell_roots_rejected_with_coefficients(rng):
    m = chain(3)
    U = random_rationals(rng, 2, 1, avoid=m.xi)
    cm = twisted_b_expansion(m, random_twist(rng), U)
    assert any(v != 0 for v in cm.subleading().values())
    with pytest.raises(OffShellError, match="sub-leading"):
        check_onshell_collapse(m, random_twist(rng), U)


def test_lambda_n1(model3, kappa):
    u = Q(9, 4)
    for form in ("direct", "partition"):
        lb = lambda_contribution(model3, kappa, [u], "B", form)
        assert max_abs(lb - kappa.k11 / kappa.k12 * model3.bethe_state([u]), Mode.EXACT) == 0
        la = lambda_contribution(model3, kappa, [u], "A", form)
        assert max_abs(la + model3.a(u) * model3.vacuum(), Mode.EXACT) == 0
    assert check_lambda_sum(model3, kappa, [u]) == 0


@pytest.mark.parametrize("n", [2, 3])
def test_lambda_forms_agree(n, rng):
    m = chain(4)
    k = random_twist(rng)
    U = random_rationals(rng, n, 1, avoid=m.xi)
    for w in "BADC":
        d = lambda_contribution(m, k, U, w, "direct")
        p = lambda_contribution(m, k, U, w, "partition")
        assert max_abs(d - p, m.mode) == 0
    assert check_lambda_sum(m, k, U) == 0


def test_vanishing_convention_matches_restricted_sum(rng, model3, kappa):
    U = random_rationals(rng, 3, 1, avoid=model3.xi)
    full = lambda_contribution(model3, kappa, U, "B")
    restricted = lambda_contribution(model3, kappa, U, "B", restrict=True)
    assert max_abs(full - restricted, Mode.EXACT) == 0


def test_any_element_can_be_distinguished(rng, model3):
    k = random_twist(rng)
    U = random_rationals(rng, 3, 1, avoid=model3.xi)
    for i in range(3):
        assert check_lambda_sum(model3, k, U, distinguished=i) == 0
    with pytest.raises(IndexError):
        lambda_contribution(model3, k, U, "B", distinguished=3)


def test_lambda_sum_float():
    m = chain(4, Mode.FLOAT)
    k = TwistMatrix.from_rows([[1, 1], [1, 2]])
    U = [0.3 + 0.8j, -1.1 + 0.4j, 1.7 - 0.6j]
    assert check_lambda_sum(m, k, U) <= 1e-9
