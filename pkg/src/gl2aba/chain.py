"""Inhomogeneous XXX spin-1/2 chain as a concrete RTT-algebra representation.

Conventions
-----------
* ``T(u) = R_{0L}(u, xi_L) ... R_{01}(u, xi_1)`` with auxiliary space 0.
* Site ``k`` (1-based) is bit ``k - 1`` of a basis index; bit value 0 is
  spin up, so the vacuum (all spins up) is basis vector 0.
* In this realization ``a(u) = prod_k f(u, xi_k)`` and ``d(u) = 1``.
"""
from __future__ import annotations

import functools
import itertools
import warnings
from dataclasses import dataclass

import numpy as np

from .kernel import g, prod_over
from .scalars import (InvariantError, Mode, PoleError, array_mode, as_mode, coincide,
                      common_mode, eye, max_abs, one, to_mode, zero, zeros)

MAX_SITES = 8
ENTRIES = ("A", "B", "C", "D")
_POS = {"A": (0, 0), "B": (0, 1), "C": (1, 0), "D": (1, 1)}


class ConsistencyError(RuntimeError):
    """The constructed operators disagree with an analytic statement about them."""


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product that also works for object (exact) arrays."""
    out = np.multiply.outer(a, b)
    return out.transpose(0, 2, 1, 3).reshape(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])


def permutation_matrix(mode: Mode) -> np.ndarray:
    P = zeros((4, 4), mode)
    for i, k in itertools.product(range(2), repeat=2):
        P[2 * i + k, 2 * k + i] = one(mode)
    return P


def build_r_matrix(u, v, c) -> np.ndarray:
    """R(u, v) = I + g(u, v) P on C^2 (x) C^2; index ``(i, k) -> 2 i + k``."""
    mode = common_mode(u, v, c)
    return eye(4, mode) + g(u, v, c) * permutation_matrix(mode)


def yang_baxter_residual(u, v, w, c):
    """Max-norm of R12(u,v) R13(u,w) R23(v,w) - R23(v,w) R13(u,w) R12(u,v) on (C^2)^3."""
    mode = common_mode(u, v, w, c)
    I2 = eye(2, mode)
    R12 = kron(build_r_matrix(u, v, c), I2)
    R23 = kron(I2, build_r_matrix(v, w, c))
    # R13 = P23 R12(u, w) P23
    P23 = kron(I2, permutation_matrix(mode))
    R13 = P23 @ kron(build_r_matrix(u, w, c), I2) @ P23
    return max_abs(R12 @ R13 @ R23 - R23 @ R13 @ R12, mode)


@dataclass(frozen=True)
class SpinChainModel:
    """Chain of ``L`` spins with inhomogeneities ``xi`` and coupling ``c``.

    Inhomogeneities must be pairwise distinct with differences different
    from ``+-c``. The one exception is the homogeneous chain (all ``xi``
    equal) which has to be requested explicitly via :meth:`homogeneous`.
    """

    xi: tuple
    c: object = 1
    mode: Mode = Mode.EXACT
    is_homogeneous: bool = False

    def __post_init__(self):
        mode = Mode(self.mode)
        xi = tuple(as_mode(x, mode) for x in self.xi)
        c = as_mode(self.c, mode)
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "c", c)
        if not 1 <= len(xi) <= MAX_SITES:
            raise InvariantError(f"chain length must be in 1..{MAX_SITES}, got {len(xi)}")
        if c == 0:
            raise InvariantError("coupling constant c must be nonzero")
        if self.is_homogeneous:
            if any(x != xi[0] for x in xi):
                raise InvariantError("homogeneous model needs equal inhomogeneities")
            return
        for x, y in itertools.combinations(xi, 2):
            if coincide(x, y, mode):
                raise InvariantError(f"inhomogeneities must be distinct ({x} = {y})")
            if coincide(x - y, c, mode) or coincide(y - x, c, mode):
                raise InvariantError(f"inhomogeneities {x}, {y} differ by +-c")

    @classmethod
    def homogeneous(cls, L: int, c=1, mode: Mode = Mode.EXACT, xi0=0):
        return cls(tuple([xi0] * L), c, mode, is_homogeneous=True)

    def as_float(self) -> "SpinChainModel":
        """Same chain in floating mode (explicit exact -> float conversion)."""
        if self.mode is Mode.FLOAT:
            return self
        return SpinChainModel(tuple(to_mode(x, Mode.FLOAT) for x in self.xi),
                              to_mode(self.c, Mode.FLOAT), Mode.FLOAT, self.is_homogeneous)

    @property
    def L(self) -> int:
        return len(self.xi)

    @property
    def dim(self) -> int:
        return 2 ** self.L

    def scalar(self, x):
        """Bring a neutral int into the model's mode; reject the other mode."""
        return as_mode(x, self.mode)

    def check_point(self, u):
        u = self.scalar(u)
        for x in self.xi:
            if coincide(u, x, self.mode):
                raise PoleError(f"spectral parameter {u} collides with inhomogeneity {x}")
        return u

    # vacuum eigenvalues
    def a(self, u):
        u = self.check_point(u)
        return prod_over("f", [u], self.xi, self.c, mode=self.mode)

    def d(self, u):
        self.check_point(u)
        return one(self.mode)

    def monodromy(self, u):
        """2x2 nested tuple ``((A, B), (C, D))`` of read-only operators."""
        return _monodromy(self, self.check_point(u))

    def entry(self, which: str, u) -> np.ndarray:
        i, j = _POS[which]
        return self.monodromy(u)[i][j]

    def A(self, u):
        return self.entry("A", u)

    def B(self, u):
        return self.entry("B", u)

    def C(self, u):
        return self.entry("C", u)

    def D(self, u):
        return self.entry("D", u)

    def transfer(self, z) -> np.ndarray:
        T = self.monodromy(z)
        return T[0][0] + T[1][1]

    def vacuum(self) -> np.ndarray:
        v = zeros(self.dim, self.mode)
        v[0] = one(self.mode)
        return v

    def identity(self) -> np.ndarray:
        return eye(self.dim, self.mode)

    def magnon_number(self) -> np.ndarray:
        """Diagonal of the operator counting down spins."""
        return np.array([bin(i).count("1") for i in range(self.dim)])

    def bethe_state(self, U) -> np.ndarray:
        """``B(u_1) ... B(u_n)|0>``."""
        U = [self.check_point(u) for u in U]
        for x, y in itertools.combinations(U, 2):
            if coincide(x, y, self.mode):
                raise PoleError(f"coincident Bethe parameters {x}")
        if len(U) > self.L:
            warnings.warn(f"{len(U)} magnons on {self.L} sites: the state vanishes", stacklevel=2)
        return apply_product([self.B(u) for u in U], self.vacuum())


def apply_product(ops, v: np.ndarray) -> np.ndarray:
    """``ops[0] @ ops[1] @ ... @ v`` evaluated right to left."""
    for op in reversed(ops):
        v = op @ v
    return v


@functools.lru_cache(maxsize=512)
def _monodromy(model: SpinChainModel, u):
    mode = model.mode
    O, I1 = zero(mode), one(mode)
    blocks = [[np.array([[I1]], dtype=object if mode is Mode.EXACT else complex),
               np.array([[O]], dtype=object if mode is Mode.EXACT else complex)],
              [None, None]]
    blocks[1] = [blocks[0][1].copy(), blocks[0][0].copy()]
    for x in model.xi:
        gk = g(u, x, model.c)
        local = [[None, None], [None, None]]
        for i, m in itertools.product(range(2), repeat=2):
            op = eye(2, mode) if i == m else zeros((2, 2), mode)
            op[m, i] = op[m, i] + gk       # g * E_{m i}
            local[i][m] = op
        blocks = [[sum(kron(local[i][m], blocks[m][j]) for m in range(2))
                   for j in range(2)] for i in range(2)]
    for row in blocks:
        for op in row:
            op.flags.writeable = False
    return tuple(tuple(row) for row in blocks)


def vacuum_profile(model: SpinChainModel, u=None):
    """Analytic ``(a, d)`` for the model, cross-checked on the vacuum at ``u``.

    Raises :class:`ConsistencyError` if ``A(u)|0>``, ``D(u)|0>`` do not match
    the analytic eigenvalues or ``C(u)|0>`` is nonzero.
    """
    if u is None:
        u = _probe_point(model)
    res = vacuum_residuals(model, u)
    tol = 0 if model.mode is Mode.EXACT else 1e-10
    if any(r > tol for r in res):
        raise ConsistencyError(f"vacuum profile mismatch at u={u}: residuals {res}")
    return model.a, model.d


def vacuum_residuals(model: SpinChainModel, u):
    """``(|A|0> - a|0>|, |D|0> - d|0>|, |C|0>|)`` as max-norms."""
    vac = model.vacuum()
    A, B, C, D = (model.entry(w, u) for w in ENTRIES)
    return (max_abs(A @ vac - model.a(u) * vac, model.mode),
            max_abs(D @ vac - model.d(u) * vac, model.mode),
            max_abs(C @ vac, model.mode))


def _probe_point(model: SpinChainModel):
    from gmpy2 import mpq
    base = mpq(7, 3) if model.mode is Mode.EXACT else complex(7 / 3, 0.1)
    return base + max((abs(x) for x in model.xi), default=0) + 2 * abs(model.c)


def rtt_residual_blocks(Tu, Tv, R: np.ndarray, mode: Mode):
    """Max-norm of ``R (T(u) x I)(I x T(v)) - (I x T(v))(T(u) x I) R``.

    ``Tu``/``Tv`` are 2x2 nested sequences of operator blocks, ``R`` a 4x4
    scalar matrix with index ``(i, k) -> 2 i + k``. Evaluated blockwise
    over the 4 x 4 auxiliary blocks of the ``4 * 2^L`` dimensional space.
    """
    r2 = range(2)
    left = {(m, j, n, l): Tu[m][j] @ Tv[n][l] for m, j, n, l in itertools.product(r2, repeat=4)}
    right = {(k, n, i, m): Tv[k][n] @ Tu[i][m] for k, n, i, m in itertools.product(r2, repeat=4)}
    worst = 0 if mode is Mode.EXACT else 0.0
    for i, k, j, l in itertools.product(r2, repeat=4):
        lhs = 0
        rhs = 0
        for m, n in itertools.product(r2, repeat=2):
            rl = R[2 * i + k, 2 * m + n]
            if rl != 0:
                lhs = lhs + rl * left[(m, j, n, l)]
            rr = R[2 * m + n, 2 * j + l]
            if rr != 0:
                rhs = rhs + right[(k, n, i, m)] * rr
        worst = max(worst, max_abs(lhs - rhs, mode))
    return worst


def rtt_residual(model: SpinChainModel, u, v):
    u, v = model.check_point(u), model.check_point(v)
    R = build_r_matrix(u, v, model.c)
    return rtt_residual_blocks(model.monodromy(u), model.monodromy(v), R, model.mode)


def transfer_commutator(model: SpinChainModel, y, z):
    Ty, Tz = model.transfer(y), model.transfer(z)
    return max_abs(Ty @ Tz - Tz @ Ty, model.mode)


def operator_to_json(op: np.ndarray):
    from .scalars import serialize_array
    return serialize_array(op)


__all__ = [
    "ConsistencyError", "SpinChainModel", "apply_product", "build_r_matrix", "kron",
    "permutation_matrix", "rtt_residual", "rtt_residual_blocks", "transfer_commutator",
    "vacuum_profile", "vacuum_residuals", "yang_baxter_residual", "array_mode",
]
