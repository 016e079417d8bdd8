"""Partition-sum action formulas and the expansion of twisted Bethe vectors.

Every formula here produces either a :class:`CoefficientMap` (coefficients
in front of ordinary off-shell Bethe vectors ``B(W_key)|0>``) or a state
vector. The direct operator products from :mod:`gl2aba.chain` and
:mod:`gl2aba.twist` are the independent oracle for each of them.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .chain import SpinChainModel
from .kernel import complement, enumerate_partitions, g, h, prod_over
from .scalars import (InvariantError, Mode, PoleError, coincide, discrepancy, max_abs, one,
                      serialize, zero)
from .twist import TwistMatrix, _matching, twisted_bethe_state, twisted_entry

LABELS3 = ("I", "II", "III")


@dataclass(frozen=True)
class Term:
    """One partition's contribution before aggregation."""

    partition: str
    key: tuple[int, ...]
    sign: int
    k11_power: int
    k12_power: int
    value: object
    scalar: object  # value with sign and twist powers stripped


@dataclass
class CoefficientMap:
    """``sum_key entries[key] * B(source[key])|0>`` with canonical sorted keys."""

    source: tuple
    entries: dict = field(default_factory=dict)
    terms: list = field(default_factory=list)

    def add(self, key, value):
        key = tuple(sorted(key))
        self.entries[key] = self.entries.get(key, 0) + value

    def evaluate(self, model: SpinChainModel) -> np.ndarray:
        out = zero(model.mode) * model.vacuum()
        for key in sorted(self.entries):
            out = out + self.entries[key] * model.bethe_state([self.source[i] for i in key])
        return out

    def subleading(self, n: int | None = None) -> dict:
        """Entries whose key is shorter than the full source set."""
        n = len(self.source) if n is None else n
        return {k: v for k, v in self.entries.items() if len(k) < n}

    def table(self) -> list[dict]:
        rows = []
        for t in self.terms:
            rows.append({"partition": t.partition, "key": list(t.key),
                         "prefactor": _prefactor(t.sign, t.k11_power, t.k12_power),
                         "coefficient": serialize(t.scalar)})
        return rows


def _prefactor(sign, p11, p12):
    parts = ["-" if sign < 0 else "+"]
    for name, p in (("k11", p11), ("k12", p12)):
        if p == 1:
            parts.append(name)
        elif p:
            parts.append(f"{name}^{p}")
    return " ".join(parts) if len(parts) > 1 else parts[0] + " 1"


def _prepare(model: SpinChainModel, U, extra=()):
    pts = [model.check_point(u) for u in (*extra, *U)]
    for x, y in itertools.combinations(pts, 2):
        if coincide(x, y, model.mode):
            raise PoleError(f"coincident parameters {x}, {y}")
    return tuple(model.scalar(u) for u in U)


def _fprod(W, X, Y, c, mode):
    return prod_over("f", [W[i] for i in X], [W[j] for j in Y], c, mode=mode)


def _aprod(model, W, X):
    return prod_over("a", [W[i] for i in X], profile=model.a, mode=model.mode)


def _dprod(model, W, X):
    return prod_over("d", [W[i] for i in X], profile=model.d, mode=model.mode)


# --- untwisted actions --------------------------------------------------------

def act_diag_on_bethe(model: SpinChainModel, which: str, z, U) -> CoefficientMap:
    """``A(z)B(U)|0>`` or ``D(z)B(U)|0>`` as a sum over ``W = z + U => {W_I, W_II}``, ``#W_I = 1``."""
    U = _prepare(model, U, (z,))
    z = model.scalar(z)
    W = (z, *U)
    c, mode = model.c, model.mode
    out = CoefficientMap(W)
    for p in enumerate_partitions(W, ("I", "II"), {"I": 1}):
        (i,), II = p.subset("I"), p.subset("II")
        w = W[i]
        if which == "A":
            coef = model.a(w) * _fprod(W, II, (i,), c, mode) / h(z, w, c)
        elif which == "D":
            coef = model.d(w) * _fprod(W, (i,), II, c, mode) / h(w, z, c)
        else:
            raise ValueError(f"which must be 'A' or 'D', got {which!r}")
        out.add(II, coef)
    return out


def act_C_on_bethe(model: SpinChainModel, z, U) -> CoefficientMap:
    """``C(z)B(U)|0>`` as a sum over ``W => {W_I, W_II, W_III}`` with ``#W_I = #W_II = 1``."""
    U = _prepare(model, U, (z,))
    z = model.scalar(z)
    W = (z, *U)
    c, mode = model.c, model.mode
    out = CoefficientMap(W)
    for p in enumerate_partitions(W, LABELS3, {"I": 1, "II": 1}):
        (i,), (j,), III = p.subset("I"), p.subset("II"), p.subset("III")
        coef = (model.d(W[i]) * model.a(W[j])
                * _fprod(W, (i,), III, c, mode) * _fprod(W, III, (j,), c, mode)
                * _fprod(W, (i,), (j,), c, mode)
                / (h(W[i], z, c) * h(z, W[j], c)))
        out.add(III, coef)
    return out


def direct_action(model: SpinChainModel, which: str, z, U) -> np.ndarray:
    return model.entry(which, z) @ model.bethe_state(U)


# --- twisted actions ----------------------------------------------------------

def check_twisted_offshell_action(model: SpinChainModel, kappa: TwistMatrix, z, U):
    """Residuals of the twisted diagonal entries acting on ``Bt(U)|0>``.

    Right-hand sides: a leading ``-+(k21/k11) Bt(z)Bt(U)|0>`` term, the
    diagonal term ``a(z) f(U, z)`` (resp. ``d(z) f(z, U)``) and the
    exchange sum over ``k``.
    """
    kappa = _matching(model, kappa)
    U = _prepare(model, U, (z,))
    z = model.scalar(z)
    c, mode = model.c, model.mode
    ratio = kappa.k21 / kappa.k11
    psi = twisted_bethe_state(model, kappa, U)
    lead = twisted_bethe_state(model, kappa, (z, *U))
    rhs_a = -ratio * lead + model.a(z) * prod_over("f", U, [z], c, mode=mode) * psi
    rhs_d = ratio * lead + model.d(z) * prod_over("f", [z], U, c, mode=mode) * psi
    for k, u in enumerate(U):
        rest = complement(U, k)
        swapped = twisted_bethe_state(model, kappa, (z, *rest))
        rhs_a = rhs_a + g(z, u, c) * model.a(u) * prod_over("f", rest, [u], c, mode=mode) * swapped
        rhs_d = rhs_d + g(u, z, c) * model.d(u) * prod_over("f", [u], rest, c, mode=mode) * swapped
    return (discrepancy(twisted_entry(model, kappa, "A", z) @ psi, rhs_a, mode),
            discrepancy(twisted_entry(model, kappa, "D", z) @ psi, rhs_d, mode))


def _require_generic_twist(kappa: TwistMatrix):
    if kappa.k12 == 0:
        raise InvariantError(
            "partition expansion needs k12 != 0; for k12 = 0 the twisted B is "
            "proportional to B, use the direct operator product instead")


def _f_part(model, kappa, W, I, II, III):
    """Scalar part of the weight attached to ``B(W_III)|0>`` for one partition."""
    c, mode = model.c, model.mode
    return ((-1) ** len(II) * (kappa.k11 / kappa.k12) ** len(III)
            * _dprod(model, W, I) * _aprod(model, W, II)
            * _fprod(W, I, II, c, mode) * _fprod(W, I, III, c, mode) * _fprod(W, III, II, c, mode))


def twisted_b_expansion(model: SpinChainModel, kappa: TwistMatrix, U) -> CoefficientMap:
    """``Bt(U)|0>`` as a combination of ``B(U_III)|0>`` over all partitions ``U => {I, II, III}``."""
    kappa = _matching(model, kappa)
    _require_generic_twist(kappa)
    U = _prepare(model, U)
    n = len(U)
    pref = (kappa.k11 * kappa.k12) ** n
    out = CoefficientMap(U)
    for p in enumerate_partitions(U, LABELS3):
        I, II, III = (p.subset(lab) for lab in LABELS3)
        scalar = (_dprod(model, U, I) * _aprod(model, U, II) * _fprod(U, I, II, model.c, model.mode)
                  * _fprod(U, I, III, model.c, model.mode) * _fprod(U, III, II, model.c, model.mode))
        val = pref * _f_part(model, kappa, U, I, II, III)
        out.add(III, val)
        out.terms.append(Term(p.serialize(), III, (-1) ** len(II),
                              n + len(III), n - len(III), val, scalar))
    return out


# --- on-shell collapse ----------------------------------------------------------

class OffShellError(ValueError):
    """Roots passed to the on-shell check do not satisfy the Bethe equations."""


@dataclass(frozen=True)
class CollapseReport:
    residual: object
    constant: object
    expected_constant: object
    constant_error: object
    subleading_max: object | None


def _inner(x, y, mode):
    if mode is Mode.EXACT:
        return sum(a * b for a, b in zip(x, y))
    return complex(np.vdot(x, y))


def check_onshell_collapse(model: SpinChainModel, kappa: TwistMatrix, roots,
                           tol: float = 1e-8) -> CollapseReport:
    """Compare ``Bt(U)|0>`` with ``k11^(2n) B(U)|0>`` for on-shell ``roots``.

    ``roots`` is a sequence of scalars or a :class:`~gl2aba.bethe.BetheRoots`.
    Also reports the largest aggregated coefficient of the expansion in
    front of ``B(U_III)|0>`` with ``#U_III < n``; these all cancel on shell.
    """
    from .bethe import bethe_residuals

    kappa = _matching(model, kappa)
    U = tuple(getattr(roots, "roots", roots))
    U = _prepare(model, U)
    n, mode = len(U), model.mode
    exact = mode is Mode.EXACT
    be = max((abs(r) for r in bethe_residuals(model, U)), default=0)
    expansion = None
    if kappa.k12 != 0:
        expansion = twisted_b_expansion(model, kappa, U)
    if (be != 0) if exact else (be > tol):
        detail = ""
        if expansion is not None:
            sub = {k: v for k, v in expansion.subleading(n).items()
                   if (v != 0 if exact else abs(v) > tol)}
            detail = "; surviving sub-leading coefficients: " + ", ".join(
                f"{list(k)}: {serialize(v)}" for k, v in sorted(sub.items()))
        raise OffShellError(f"Bethe residual {be} exceeds tolerance{detail}")
    psi = model.bethe_state(U)
    tpsi = twisted_bethe_state(model, kappa, U)
    expected = kappa.k11 ** (2 * n)
    norm = _inner(psi, psi, mode)
    constant = _inner(psi, tpsi, mode) / norm if norm != 0 else expected
    sub_max = None
    if expansion is not None:
        sub_max = max((abs(v) for v in expansion.subleading(n).values()),
                      default=0 if exact else 0.0)
        if not exact:
            sub_max = float(sub_max)
    return CollapseReport(residual=max_abs(tpsi - expected * psi, mode),
                          constant=constant, expected_constant=expected,
                          constant_error=abs(constant - expected),
                          subleading_max=sub_max)


# --- the four contributions of the induction step -------------------------------

def _recip_f_to(model, W, X, n_idx):
    """``1 / f(W_X, w_n)``; exactly zero when ``n_idx`` is in ``X``."""
    if n_idx in X:
        return zero(model.mode)
    return one(model.mode) / _fprod(W, X, (n_idx,), model.c, model.mode)


def _recip_f_from(model, W, X, n_idx):
    """``1 / f(w_n, W_X)``; exactly zero when ``n_idx`` is in ``X``."""
    if n_idx in X:
        return zero(model.mode)
    return one(model.mode) / _fprod(W, (n_idx,), X, model.c, model.mode)


def _weight(model, which, W, I, II, n_idx):
    rI = _recip_f_to(model, W, I, n_idx)
    rII = _recip_f_from(model, W, II, n_idx)
    if which == "B":
        return rI * rII
    if which == "A":
        return rI * (1 - rII)
    if which == "D":
        return rII * (1 - rI)
    if which == "C":
        return (1 - rII) * (1 - rI)
    raise ValueError(f"which must be one of B, A, D, C, got {which!r}")


def lambda_contribution(model: SpinChainModel, kappa: TwistMatrix, U, which: str,
                        form: str = "partition", distinguished: int | None = None,
                        restrict: bool = False) -> np.ndarray:
    """Contribution of one operator of ``Bt(u_n)`` acting on ``Bt(U_n)|0>``.

    The state acted upon is the normalized sum ``Bt(U_n)|0> / (k11 k12)^(n-1)``
    so that ``Bt(U)|0> = (k11 k12)^n * (L[B] + L[A] + L[D] + L[C])``.

    ``form="direct"`` applies ``(k11/k12) B``, ``-A``, ``D`` or ``-(k12/k11) C``
    at ``u_n`` to the (n-1)-expansion; ``form="partition"`` sums over all
    partitions of the full set with reciprocal f-products over a subset that
    contains ``u_n`` set to zero. ``restrict`` drops those partitions instead
    of relying on the zero (only meaningful for ``which="B"``).
    """
    kappa = _matching(model, kappa)
    _require_generic_twist(kappa)
    U = _prepare(model, U)
    n = len(U)
    if n < 1:
        raise ValueError("need at least one parameter")
    n_idx = n - 1 if distinguished is None else distinguished
    if not 0 <= n_idx < n:
        raise IndexError(f"distinguished index {n_idx} out of range")
    un = U[n_idx]
    if form == "direct":
        rest = complement(U, n_idx)
        if rest:
            S = twisted_b_expansion(model, kappa, rest).evaluate(model) / (kappa.k11 * kappa.k12) ** len(rest)
        else:
            S = model.vacuum()
        scale = {"B": kappa.k11 / kappa.k12, "A": -1, "D": 1, "C": -kappa.k12 / kappa.k11}[which]
        return scale * (model.entry(which, un) @ S)
    if form != "partition":
        raise ValueError(f"form must be 'direct' or 'partition', got {form!r}")
    out = zero(model.mode) * model.vacuum()
    for p in enumerate_partitions(U, LABELS3):
        I, II, III = (p.subset(lab) for lab in LABELS3)
        if restrict and n_idx not in III:
            continue
        w = _weight(model, which, U, I, II, n_idx)
        if w == 0:
            continue
        out = out + (w * _f_part(model, kappa, U, I, II, III)) * model.bethe_state([U[i] for i in III])
    return out


def check_lambda_sum(model: SpinChainModel, kappa: TwistMatrix, U, distinguished: int | None = None):
    """Max discrepancy among the three routes to ``Bt(U)|0>``.

    Compares ``(k11 k12)^n * sum of the four contributions`` (both forms)
    against the direct product and against :func:`twisted_b_expansion`.
    """
    kappa = _matching(model, kappa)
    U = _prepare(model, U)
    n = len(U)
    pref = (kappa.k11 * kappa.k12) ** n
    direct = twisted_bethe_state(model, kappa, U)
    expanded = twisted_b_expansion(model, kappa, U).evaluate(model)
    sums = {form: pref * sum(lambda_contribution(model, kappa, U, w, form, distinguished)
                             for w in ("B", "A", "D", "C"))
            for form in ("direct", "partition")}
    return max(discrepancy(sums["partition"], direct, model.mode),
               discrepancy(sums["direct"], direct, model.mode),
               discrepancy(sums["partition"], expanded, model.mode),
               discrepancy(expanded, direct, model.mode))
