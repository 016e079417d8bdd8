"""Rational functions g, f, h, their set products, and labeled set partitions.

With coupling ``c``::

    g(u, v) = c / (u - v)
    f(u, v) = 1 + g(u, v) = (u - v + c) / (u - v)
    h(u, v) = f(u, v) / g(u, v) = (u - v + c) / c

Parameter sets are plain sequences of scalars; elements are addressed by
their position so that coincident values stay distinguishable.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Callable, Mapping, Sequence

import numpy as np
from gmpy2 import mpq

from .scalars import Mode, PoleError, as_mode, coincide, common_mode, one, zero

ROMAN = ("I", "II", "III", "IV", "V", "VI")


def g(u, v, c):
    mode = common_mode(u, v, c)
    u, v, c = as_mode(u, mode), as_mode(v, mode), as_mode(c, mode)
    if coincide(u, v, mode):
        raise PoleError(f"g({u}, {v}) has a pole at u = v")
    return c / (u - v)


def f(u, v, c):
    mode = common_mode(u, v, c)
    u, v, c = as_mode(u, mode), as_mode(v, mode), as_mode(c, mode)
    if coincide(u, v, mode):
        raise PoleError(f"f({u}, {v}) has a pole at u = v")
    return (u - v + c) / (u - v)


def h(u, v, c):
    mode = common_mode(u, v, c)
    u, v, c = as_mode(u, mode), as_mode(v, mode), as_mode(c, mode)
    if c == 0:
        raise PoleError("h is undefined for c = 0")
    return (u - v + c) / c


_FUNCS = {"g": g, "f": f, "h": h}


def eval_scalar_fn(kind: str, u, v, c):
    """Evaluate ``g``, ``f`` or ``h`` at ``(u, v)``."""
    try:
        fn = _FUNCS[kind]
    except KeyError:
        raise ValueError(f"unknown function kind {kind!r}") from None
    return fn(u, v, c)


def prod_over(kind: str, X: Sequence, Y: Sequence = (), c=None,
              profile: Callable | None = None, mode: Mode | None = None):
    """Product over a set (kinds ``a``, ``d``) or over ``X x Y`` (``f``, ``g``, ``h``).

    ``profile`` is the vacuum-eigenvalue function for ``a``/``d``; pass
    ``model.a`` or ``model.d``. An empty set gives 1.
    """
    mode = mode or common_mode(*X, *Y, *([] if c is None else [c]))
    acc = one(mode)
    if kind in ("a", "d"):
        if profile is None:
            raise ValueError(f"kind {kind!r} needs a vacuum profile function")
        for x in X:
            acc = acc * profile(x)
        return acc
    fn = _FUNCS.get(kind)
    if fn is None:
        raise ValueError(f"unknown product kind {kind!r}")
    if c is None:
        raise ValueError("coupling c is required for f/g/h products")
    for x in X:
        for y in Y:
            acc = acc * fn(x, y, c)
    return acc


def complement(U: Sequence, k: int) -> tuple:
    """``U`` with its ``k``-th element removed, order preserved."""
    return tuple(U[:k]) + tuple(U[k + 1:])


# --- partitions -------------------------------------------------------------

@dataclass(frozen=True)
class Partition:
    """Assignment of elements ``0..n-1`` to labeled, disjoint subsets."""

    assignment: tuple[int, ...]
    labels: tuple[str, ...]

    def subset(self, label: str | int) -> tuple[int, ...]:
        k = self.labels.index(label) if isinstance(label, str) else label
        return tuple(i for i, a in enumerate(self.assignment) if a == k)

    def values(self, S: Sequence, label: str | int) -> tuple:
        return tuple(S[i] for i in self.subset(label))

    def serialize(self) -> str:
        return ",".join(self.labels[a] for a in self.assignment)

    def __len__(self):
        return len(self.assignment)


def enumerate_partitions(S: Sequence | int, labels: Sequence[str] = ROMAN[:2],
                         constraints: Mapping[str, int] | None = None) -> list[Partition]:
    """All labeled partitions of ``S`` meeting fixed-cardinality ``constraints``.

    Order is lexicographic in the per-element label index, element 0 most
    significant. Unsatisfiable constraints yield an empty list.
    """
    n = S if isinstance(S, int) else len(S)
    labels = tuple(labels)
    fixed = {labels.index(k): v for k, v in (constraints or {}).items()}
    if any(v < 0 for v in fixed.values()):
        return []
    total = sum(fixed.values())
    if total > n or (len(fixed) == len(labels) and total != n):
        return []
    out = []
    for assignment in itertools.product(range(len(labels)), repeat=n):
        if all(assignment.count(k) == v for k, v in fixed.items()):
            out.append(Partition(assignment, labels))
    return out


def count_partitions(n: int, k: int, fixed: Mapping[int, int] | None = None) -> int:
    """Closed-form count of labeled partitions (used as an independent oracle)."""
    fixed = dict(fixed or {})
    free = k - len(fixed)
    rest = n - sum(fixed.values())
    if rest < 0 or (free == 0 and rest != 0):
        return 0
    count = 1
    left = n
    for s in fixed.values():
        count *= comb(left, s)
        left -= s
    return count * (free ** rest if free else 1)


# --- partition identities ---------------------------------------------------

def _check_distinct(U: Sequence, z, mode: Mode):
    pts = list(U) + [z]
    for i, j in itertools.combinations(range(len(pts)), 2):
        if coincide(pts[i], pts[j], mode):
            raise PoleError(f"coincident arguments {pts[i]} and {pts[j]}")


def partition_identity_residual(identity: str, z, U: Sequence, c):
    """Evaluate both sides of one of the partial-fraction identities.

    ``PDF``:     f(U, z) - 1 = sum_k g(u_k, z) f(U_k, u_k)
    ``IdA1``:    f(z, U) - 1 = sum_k g(z, u_k) f(u_k, U_k)
    ``PDF1``:    f(z, U) - 1 = sum over U => {i, II}, #i = 1 of f(U_i, U_II) g(z, U_i)
    ``subsum2``: f(U, z) - 1 = sum over U => {i, I},  #i = 1 of f(U_I, U_i) g(U_i, z)

    The first two are summed over the element index, the last two over
    enumerated partitions. Returns ``(lhs, rhs)``.
    """
    mode = common_mode(z, c, *U)
    _check_distinct(U, z, mode)
    n = len(U)
    if identity == "PDF":
        lhs = prod_over("f", U, [z], c, mode=mode) - 1
        rhs = zero(mode)
        for k in range(n):
            rhs += g(U[k], z, c) * prod_over("f", complement(U, k), [U[k]], c, mode=mode)
    elif identity == "IdA1":
        lhs = prod_over("f", [z], U, c, mode=mode) - 1
        rhs = zero(mode)
        for k in range(n):
            rhs += g(z, U[k], c) * prod_over("f", [U[k]], complement(U, k), c, mode=mode)
    elif identity == "PDF1":
        lhs = prod_over("f", [z], U, c, mode=mode) - 1
        rhs = zero(mode)
        for p in enumerate_partitions(U, ("i", "II"), {"i": 1}):
            ui, uII = p.values(U, "i"), p.values(U, "II")
            rhs += prod_over("f", ui, uII, c, mode=mode) * prod_over("g", [z], ui, c, mode=mode)
    elif identity == "subsum2":
        lhs = prod_over("f", U, [z], c, mode=mode) - 1
        rhs = zero(mode)
        for p in enumerate_partitions(U, ("i", "I"), {"i": 1}):
            ui, uI = p.values(U, "i"), p.values(U, "I")
            rhs += prod_over("f", uI, ui, c, mode=mode) * prod_over("g", ui, [z], c, mode=mode)
    else:
        raise ValueError(f"unknown identity {identity!r}")
    return lhs, rhs


def binomial_partition_sum(X: Sequence, s: int, c):
    """Sum of f(X_II, X_I) over partitions X => {X_I, X_II} with #X_II = s.

    The sum is a constant equal to ``C(len(X), s)`` although single terms
    are singular when two elements of X coincide.
    """
    mode = common_mode(c, *X)
    if not 0 <= s <= len(X):
        raise ValueError(f"s={s} outside 0..{len(X)}")
    total = zero(mode)
    for p in enumerate_partitions(X, ("I", "II"), {"II": s}):
        total += prod_over("f", p.values(X, "II"), p.values(X, "I"), c, mode=mode)
    return total


# --- random sample points ---------------------------------------------------

def random_rationals(rng: np.random.Generator, n: int, c=1, avoid: Sequence = (),
                     min_gap=mpq(1, 100), max_tries: int = 10_000) -> list:
    """Draw ``n`` rationals ``p/q``, p in [-20, 20], q in [1, 10].

    Rejection keeps every pairwise distance (including against ``avoid``)
    at least ``min_gap`` and every difference away from ``0`` and ``+-c``,
    so neither poles of g nor zeros of f are hit.
    """
    c = mpq(c)
    out: list = []
    pool = [mpq(x) for x in avoid]
    for _ in range(max_tries):
        if len(out) == n:
            return out
        x = mpq(int(rng.integers(-20, 21)), int(rng.integers(1, 11)))
        ok = True
        for y in pool:
            d = x - y
            if abs(d) < min_gap or d == c or d == -c:
                ok = False
                break
        if ok:
            out.append(x)
            pool.append(x)
    if len(out) < n:
        raise RuntimeError(f"could not draw {n} admissible rationals")
    return out


def random_complex(rng: np.random.Generator, n: int, scale: float = 1.0) -> list[complex]:
    return [complex(a, b) for a, b in scale * rng.standard_normal((n, 2))]
