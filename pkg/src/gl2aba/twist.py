"""Twisted monodromy matrices ``kappa T kappa^-1`` and ``kappa1 T kappa2``."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from gmpy2 import mpq

from .chain import ENTRIES, SpinChainModel, _POS, rtt_residual_blocks, build_r_matrix
from .scalars import (InvariantError, Mode, as_mode, common_mode, discrepancy, max_abs, parse,
                      serialize, to_mode)


@dataclass(frozen=True)
class TwistMatrix:
    """Unimodular 2x2 twist with nonzero ``k11``."""

    k11: object
    k12: object
    k21: object
    k22: object

    def __post_init__(self):
        mode = common_mode(self.k11, self.k12, self.k21, self.k22)
        for name in ("k11", "k12", "k21", "k22"):
            object.__setattr__(self, name, as_mode(getattr(self, name), mode))
        det = self.k11 * self.k22 - self.k12 * self.k21
        if mode is Mode.EXACT:
            if det != 1:
                raise InvariantError(f"det kappa must be 1, got {det}")
        elif abs(det - 1) > 1e-12:
            raise InvariantError(f"det kappa must be 1, got {det}")
        if self.k11 == 0:
            raise InvariantError("kappa_11 must be nonzero")

    @classmethod
    def from_rows(cls, rows):
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @property
    def mode(self) -> Mode:
        return common_mode(self.k11, self.k12, self.k21, self.k22)

    @property
    def rows(self):
        return ((self.k11, self.k12), (self.k21, self.k22))

    @property
    def inverse_rows(self):
        return ((self.k22, -self.k12), (-self.k21, self.k11))

    def to_mode(self, mode: Mode) -> "TwistMatrix":
        return TwistMatrix(*(to_mode(x, mode) for row in self.rows for x in row))

    def to_json(self):
        return [[serialize(x) for x in row] for row in self.rows]

    @classmethod
    def from_json(cls, obj, mode: Mode | None = None):
        return cls.from_rows([[parse(x, mode) for x in row] for row in obj])


def _matching(model: SpinChainModel, kappa: TwistMatrix) -> TwistMatrix:
    if kappa.mode is not model.mode:
        kappa = kappa.to_mode(model.mode)
    return kappa


def twisted_entry(model: SpinChainModel, kappa: TwistMatrix, which: str, u) -> np.ndarray:
    """Entry of ``kappa T(u) kappa^-1`` from its expansion in A, B, C, D."""
    kappa = _matching(model, kappa)
    A, B, C, D = (model.entry(w, u) for w in ENTRIES)
    k11, k12, k21, k22 = kappa.k11, kappa.k12, kappa.k21, kappa.k22
    if which == "A":
        return k11 * k22 * A - k11 * k21 * B + k12 * k22 * C - k12 * k21 * D
    if which == "D":
        return k11 * k22 * D + k11 * k21 * B - k12 * k22 * C - k12 * k21 * A
    if which == "B":
        return k11 ** 2 * B + k11 * k12 * (D - A) - k12 ** 2 * C
    if which == "C":
        # not printed alongside the other three; follows from the same conjugation
        return k21 * k22 * A - k21 ** 2 * B + k22 ** 2 * C - k21 * k22 * D
    raise ValueError(f"unknown entry {which!r}")


def conjugated_blocks(model: SpinChainModel, left, right, u):
    """Blocks of ``left . T(u) . right`` for 2x2 scalar matrices, by explicit summation."""
    T = model.monodromy(u)
    return tuple(tuple(sum(left[i][m] * T[m][n] * right[n][j]
                           for m, n in itertools.product(range(2), repeat=2))
                       for j in range(2)) for i in range(2))


def twisted_monodromy(model: SpinChainModel, kappa: TwistMatrix, u):
    """``kappa T(u) kappa^-1`` as nested blocks, via blockwise conjugation."""
    kappa = _matching(model, kappa)
    return conjugated_blocks(model, kappa.rows, kappa.inverse_rows, u)


def entry_formula_residual(model: SpinChainModel, kappa: TwistMatrix, u):
    """Max discrepancy between the entry formulas and blockwise conjugation."""
    T = twisted_monodromy(model, kappa, u)
    return max(discrepancy(twisted_entry(model, kappa, w, u), T[i][j], model.mode)
               for w, (i, j) in _POS.items())


def twisted_bethe_state(model: SpinChainModel, kappa: TwistMatrix, U) -> np.ndarray:
    """``Bt(u_1) ... Bt(u_n)|0>`` by direct operator products."""
    v = model.vacuum()
    for u in reversed(list(U)):
        v = twisted_entry(model, kappa, "B", u) @ v
    return v


def check_twisted_vacuum_action(model: SpinChainModel, kappa: TwistMatrix, z):
    """Residuals of the twisted diagonal entries acting on the vacuum.

    ``At(z)|0> = a(z)|0> - (k21/k11) Bt(z)|0>`` and
    ``Dt(z)|0> = d(z)|0> + (k21/k11) Bt(z)|0>``.
    """
    kappa = _matching(model, kappa)
    vac = model.vacuum()
    ratio = kappa.k21 / kappa.k11
    Bv = twisted_entry(model, kappa, "B", z) @ vac
    ra = discrepancy(twisted_entry(model, kappa, "A", z) @ vac, model.a(z) * vac - ratio * Bv, model.mode)
    rd = discrepancy(twisted_entry(model, kappa, "D", z) @ vac, model.d(z) * vac + ratio * Bv, model.mode)
    return ra, rd


def check_trace_preservation(model: SpinChainModel, kappa: TwistMatrix, z):
    """Max-norm of ``At(z) + Dt(z) - A(z) - D(z)``."""
    At = twisted_entry(model, kappa, "A", z)
    Dt = twisted_entry(model, kappa, "D", z)
    return discrepancy(At + Dt, model.transfer(z), model.mode)


def _check_invertible(k, mode):
    det = k[0][0] * k[1][1] - k[0][1] * k[1][0]
    if (det == 0) if mode is Mode.EXACT else abs(det) < 1e-14:
        raise InvariantError("two-sided twist matrices must be invertible")


def _as_rows(model, k):
    if isinstance(k, TwistMatrix):
        k = _matching(model, k).rows
    return tuple(tuple(model.scalar(x) for x in row) for row in k)


def general_twist_entry(model: SpinChainModel, kappa1, kappa2, which: str, u) -> np.ndarray:
    """Entry of ``kappa1 T(u) kappa2`` for arbitrary invertible 2x2 matrices."""
    k1, k2 = _as_rows(model, kappa1), _as_rows(model, kappa2)
    _check_invertible(k1, model.mode)
    _check_invertible(k2, model.mode)
    i, j = _POS[which]
    return conjugated_blocks(model, k1, k2, u)[i][j]


def general_twist_rtt_residual(model: SpinChainModel, kappa1, kappa2, u, v):
    """RTT residual for ``kappa1 T kappa2``; relative to the operand scale in float mode."""
    k1, k2 = _as_rows(model, kappa1), _as_rows(model, kappa2)
    _check_invertible(k1, model.mode)
    _check_invertible(k2, model.mode)
    u, v = model.check_point(u), model.check_point(v)
    R = build_r_matrix(u, v, model.c)
    Tu, Tv = conjugated_blocks(model, k1, k2, u), conjugated_blocks(model, k1, k2, v)
    res = rtt_residual_blocks(Tu, Tv, R, model.mode)
    if model.mode is Mode.EXACT:
        return res
    # twist entries can be large; report relative to the size of the products
    scale = (max(max_abs(b, model.mode) for row in Tu for b in row)
             * max(max_abs(b, model.mode) for row in Tv for b in row)
             * max_abs(R, model.mode))
    return res / scale if scale else res


def general_twist_trace_defect(model: SpinChainModel, kappa1, kappa2, z):
    """``max|tr(kappa1 T kappa2) - tr T|``; generically nonzero unless kappa2 = kappa1^-1."""
    A = general_twist_entry(model, kappa1, kappa2, "A", z)
    D = general_twist_entry(model, kappa1, kappa2, "D", z)
    return max_abs(A + D - model.transfer(z), model.mode)


def random_twist(rng, mode: Mode = Mode.EXACT, generic: bool = True) -> TwistMatrix:
    """Random unimodular twist with small rational entries.

    ``k11``, ``k12``, ``k21`` are drawn nonzero (when ``generic``) and ``k22``
    is solved from ``det = 1``.
    """
    def draw():
        while True:
            x = mpq(int(rng.integers(-9, 10)), int(rng.integers(1, 6)))
            if x != 0:
                return x

    k11, k12 = draw(), draw()
    k21 = draw() if generic else mpq(0)
    k22 = (1 + k12 * k21) / k11
    kappa = TwistMatrix(k11, k12, k21, k22)
    return kappa if mode is Mode.EXACT else kappa.to_mode(Mode.FLOAT)


def random_invertible(rng):
    while True:
        k = [[mpq(int(rng.integers(-9, 10)), int(rng.integers(1, 6))) for _ in range(2)]
             for _ in range(2)]
        if k[0][0] * k[1][1] - k[0][1] * k[1][0] != 0:
            return k
