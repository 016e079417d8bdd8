import itertools
from math import comb

import pytest
from gmpy2 import mpq
from hypothesis import assume, given, settings, strategies as st

from gl2aba.kernel import (binomial_partition_sum, complement, count_partitions,
                           enumerate_partitions, eval_scalar_fn, f, g, h,
                           partition_identity_residual, prod_over, random_rationals)
from gl2aba.scalars import ModeError, PoleError, Q

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=30)


def test_scalar_fn_examples():
    assert eval_scalar_fn("g", Q(3), Q(1), 1) == Q(1, 2)
    assert eval_scalar_fn("f", Q(0), Q(1), 1) == 0
    for c in (Q(1), Q(-3, 7), Q(5)):
        assert eval_scalar_fn("h", Q(2, 3), Q(2, 3), c) == 1


@pytest.mark.parametrize("kind", ["g", "f"])
def test_pole_rejected(kind):
    with pytest.raises(PoleError):
        eval_scalar_fn(kind, Q(1, 3), Q(1, 3), 1)
    with pytest.raises(PoleError):
        eval_scalar_fn(kind, 0.5 + 0j, 0.5 + 1e-10j, 1)


def test_mode_mixing_is_an_error():
    with pytest.raises(ModeError):
        g(Q(1), 2.0, 1)
    with pytest.raises(ModeError):
        f(1.5j, Q(1, 2), 1)


@given(rationals, rationals, rationals)
def test_fgh_relations(u, v, c):
    assume(u != v and c != 0)
    u, v, c = mpq(u), mpq(v), mpq(c)
    assert f(u, v, c) == 1 + g(u, v, c)
    assert g(u, v, c) * h(u, v, c) == f(u, v, c)


def test_prod_over_examples():
    assert prod_over("f", [Q(5)], [Q(1), Q(2)], 1) == Q(5, 3)
    assert prod_over("f", [Q(5, 4), Q(1, 2)], [Q(5), Q(1)], 1) == \
        f(Q(5, 4), Q(5), 1) * f(Q(5, 4), Q(1), 1) * f(Q(1, 2), Q(5), 1) * f(Q(1, 2), Q(1), 1)
    for kind in ("f", "g", "h"):
        assert prod_over(kind, [], [Q(1)], 1) == 1
        assert prod_over(kind, [Q(1)], [], 1) == 1
    assert prod_over("a", [], profile=lambda x: 7) == 1
    assert prod_over("f", [Q(1)], [Q(2)], 1) == 0


def test_prod_over_needs_profile():
    with pytest.raises(ValueError):
        prod_over("a", [Q(1)])


def test_complement_preserves_order():
    assert complement((1, 2, 3, 4), 1) == (1, 3, 4)


def test_partition_counts_examples():
    assert len(enumerate_partitions(2, ("I", "II", "III"))) == 9
    assert len(enumerate_partitions(2, ("I", "II"), {"I": 1})) == 2
    # brute force over label assignments
    brute = sum(1 for a in itertools.product(range(3), repeat=3)
                if a.count(0) == 1 and a.count(1) == 1)
    assert brute == 6
    assert len(enumerate_partitions(3, ("I", "II", "III"), {"I": 1, "II": 1})) == brute


def test_partition_enumeration_order_and_serialization():
    parts = enumerate_partitions(2, ("I", "II"))
    assert [p.serialize() for p in parts] == ["I,I", "I,II", "II,I", "II,II"]
    p = enumerate_partitions(3, ("I", "II", "III"))[5]
    assert p.serialize() == "I,II,III"
    assert p.subset("III") == (2,)
    assert p.values("xyz", "II") == ("y",)


def test_unsatisfiable_constraints_give_empty():
    assert enumerate_partitions(2, ("I", "II"), {"I": 3}) == []
    assert enumerate_partitions(3, ("I", "II"), {"I": 1, "II": 1}) == []


@given(st.integers(0, 6), st.integers(1, 4), st.data())
@settings(max_examples=60, deadline=None)
def test_partition_count_properties(n, k, data):
    labels = ("I", "II", "III", "IV")[:k]
    parts = enumerate_partitions(n, labels)
    assert len(parts) == k ** n
    assert len({p.assignment for p in parts}) == len(parts)
    for p in parts:
        assert sorted(sum((p.subset(lab) for lab in labels), ())) == list(range(n))
    s = data.draw(st.integers(0, n))
    fixed = enumerate_partitions(n, labels, {"I": s})
    expected = comb(n, s) * (k - 1) ** (n - s) if k > 1 else int(s == n)
    assert len(fixed) == expected
    assert len(fixed) == count_partitions(n, k, {0: s})


# --- partial-fraction identities ------------------------------------------------

def test_pdf_example():
    lhs, rhs = partition_identity_residual("PDF", Q(0), [Q(1), Q(2)], 1)
    # f(1,0) f(2,0) - 1 = 2 * 3/2 - 1
    assert lhs == rhs == 2


@pytest.mark.parametrize("identity", ["PDF", "IdA1", "PDF1", "subsum2"])
def test_empty_set(identity):
    assert partition_identity_residual(identity, Q(3), [], 1) == (0, 0)


@pytest.mark.parametrize("identity", ["IdA1", "PDF1"])
def test_single_element(identity):
    z, u = Q(2, 3), Q(-7, 5)
    lhs, rhs = partition_identity_residual(identity, z, [u], 1)
    assert lhs == rhs == g(z, u, 1)


@pytest.mark.parametrize("identity", ["PDF", "IdA1", "PDF1", "subsum2"])
def test_identities_random_exact(identity, rng):
    for _ in range(100):
        n = int(rng.integers(0, 7))
        c = Q(int(rng.integers(1, 4)), int(rng.integers(1, 3)))
        z, *U = random_rationals(rng, n + 1, c)
        lhs, rhs = partition_identity_residual(identity, z, U, c)
        assert lhs == rhs


def test_identity_rejects_collision():
    with pytest.raises(PoleError):
        partition_identity_residual("PDF", Q(1), [Q(1), Q(2)], 1)


def test_identities_float_mode(rng):
    U = [complex(x, y) for x, y in rng.standard_normal((5, 2))]
    lhs, rhs = partition_identity_residual("subsum2", 0.3 + 0.1j, U, 1 + 0j)
    assert abs(lhs - rhs) < 1e-10


# --- binomial partition sum ------------------------------------------------------

def test_binomial_examples():
    assert binomial_partition_sum([Q(0), Q(1)], 1, 1) == 2
    assert f(Q(1), Q(0), 1) + f(Q(0), Q(1), 1) == 2
    assert binomial_partition_sum([Q(3), Q(-1, 2), Q(5)], 0, 1) == 1
    # three terms summed by hand in exact arithmetic
    X = [Q(1, 3), Q(2), Q(-5, 2)]
    terms = [prod_over("f", [X[i], X[j]], [X[k]], 1)
             for i, j, k in ((0, 1, 2), (0, 2, 1), (1, 2, 0))]
    assert sum(terms) == 3
    assert binomial_partition_sum(X, 2, 1) == 3


def test_binomial_sum_is_binomial_and_x_independent(rng):
    for l in range(7):
        for s in range(l + 1):
            a = binomial_partition_sum(random_rationals(rng, l, 1), s, 1)
            b = binomial_partition_sum(random_rationals(rng, l, 1), s, 1)
            assert a == b == comb(l, s)


def test_binomial_rejects_coincidence():
    with pytest.raises(PoleError):
        binomial_partition_sum([Q(1), Q(1)], 1, 1)


@pytest.mark.parametrize("s", [0, 1, 2])
def test_binomial_near_coincidence_is_regular(s):
    x = 0.37 + 0.11j
    for eps in (1e-1, 1e-2, 1e-3, 1e-4):
        val = binomial_partition_sum([x, x + eps], s, 1 + 0j)
        assert abs(val - comb(2, s)) < 1e-6


def test_random_rationals_constraints(rng):
    c = Q(1)
    pts = random_rationals(rng, 12, c, avoid=[Q(0)])
    for x, y in itertools.combinations([Q(0), *pts], 2):
        d = x - y
        assert abs(d) >= Q(1, 100) and d not in (c, -c)
    for p in pts:
        assert -20 <= p <= 20 and p.denominator <= 10
