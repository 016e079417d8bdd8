"""Bethe equations, their numerical solution, and transfer-matrix actions."""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

import numpy as np

from .chain import SpinChainModel
from .kernel import complement, g, prod_over
from .scalars import COLLISION_DELTA, Mode, PoleError, coincide, discrepancy, max_abs
from .twist import TwistMatrix, twisted_bethe_state

log = logging.getLogger(__name__)


def _check_roots(model: SpinChainModel, U):
    U = [model.check_point(u) for u in U]
    for x, y in itertools.combinations(U, 2):
        if coincide(x, y, model.mode):
            raise PoleError(f"coincident Bethe parameters {x}, {y}")
    return U


def bethe_residuals(model: SpinChainModel, U) -> list:
    """``a(u_k) f(U_k, u_k) - d(u_k) f(u_k, U_k)`` for every k."""
    U = _check_roots(model, U)
    c, mode = model.c, model.mode
    out = []
    for k, u in enumerate(U):
        rest = complement(U, k)
        out.append(model.a(u) * prod_over("f", rest, [u], c, mode=mode)
                   - model.d(u) * prod_over("f", [u], rest, c, mode=mode))
    return out


def lambda0(model: SpinChainModel, z, U):
    """Eigenvalue functional ``a(z) f(U, z) + d(z) f(z, U)``."""
    U = _check_roots(model, U)
    z = model.check_point(z)
    c, mode = model.c, model.mode
    return (model.a(z) * prod_over("f", U, [z], c, mode=mode)
            + model.d(z) * prod_over("f", [z], U, c, mode=mode))


def lambda_k(model: SpinChainModel, z, U, k: int):
    """Coefficient of the unwanted term ``B(U_k) B(z)|0>``."""
    U = _check_roots(model, U)
    z = model.check_point(z)
    c, mode = model.c, model.mode
    u, rest = U[k], complement(U, k)
    return g(z, u, c) * (model.a(u) * prod_over("f", rest, [u], c, mode=mode)
                         - model.d(u) * prod_over("f", [u], rest, c, mode=mode))


def check_transfer_action(model: SpinChainModel, z, U):
    """Residual of ``T(z)B(U)|0> = L0 B(U)|0> + sum_k Lk B(U_k) B(z)|0>``."""
    U = _check_roots(model, U)
    z = model.check_point(z)
    psi = model.bethe_state(U)
    rhs = lambda0(model, z, U) * psi
    for k in range(len(U)):
        rhs = rhs + lambda_k(model, z, U, k) * model.bethe_state([*complement(U, k), z])
    return discrepancy(model.transfer(z) @ psi, rhs, model.mode)


def check_twisted_transfer_action(model: SpinChainModel, kappa: TwistMatrix, z, U):
    """Same decomposition for twisted states ``Bt(U)|0>`` with the untwisted Lambdas."""
    U = _check_roots(model, U)
    z = model.check_point(z)
    psi = twisted_bethe_state(model, kappa, U)
    rhs = lambda0(model, z, U) * psi
    for k in range(len(U)):
        rhs = rhs + lambda_k(model, z, U, k) * twisted_bethe_state(
            model, kappa, [z, *complement(U, k)])
    return discrepancy(model.transfer(z) @ psi, rhs, model.mode)


def magnon_grading_residuals(model: SpinChainModel, z, u):
    """``(|[T(z), N]|, |[N, B(u)] - B(u)|)`` with N the down-spin counter."""
    N = np.diag(model.magnon_number()).astype(object if model.mode is Mode.EXACT else complex)
    T, B = model.transfer(z), model.B(u)
    return (max_abs(T @ N - N @ T, model.mode),
            max_abs(N @ B - B @ N - B, model.mode))


# --- solver -----------------------------------------------------------------

@dataclass(frozen=True)
class BetheRoots:
    roots: tuple
    residuals: tuple
    eigen_residual: float

    @property
    def n(self) -> int:
        return len(self.roots)

    @property
    def residual_max(self) -> float:
        return max(self.residuals, default=0.0)


@dataclass
class SolveResult:
    """Accepted root sets plus a log of restarts that failed."""

    roots: list[BetheRoots] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)

    def __getitem__(self, i):
        return self.roots[i]


def _product_with_grad(factors, n):
    """Value and gradient of a product of ``(value, {index: derivative})`` factors."""
    vals = [v for v, _ in factors]
    total = np.prod(vals) if vals else 1.0 + 0j
    grad = np.zeros(n, dtype=complex)
    for i, (_, dv) in enumerate(factors):
        others = np.prod(vals[:i] + vals[i + 1:]) if len(vals) > 1 else 1.0 + 0j
        for j, d in dv.items():
            grad[j] += d * others
    return total, grad


def _linear(x, shift, k, j=None):
    """Factor ``x + shift`` where ``x = u_k`` or ``x = u_k - u_j``, with its gradient."""
    grad = {k: 1.0}
    if j is not None:
        grad[j] = -1.0
    return x + shift, grad


def bethe_system(model: SpinChainModel, u: np.ndarray):
    """Denominator-cleared Bethe equations and their analytic Jacobian (float).

    Multiplying the k-th equation by ``prod_m (u_k - xi_m) prod_j (u_k - u_j)``
    gives the polynomial system::

        prod_m (u_k - xi_m + c) prod_j (u_k - u_j - c)
            - prod_m (u_k - xi_m) prod_j (u_k - u_j + c) = 0

    which, unlike the rational form, does not decay as ``u -> infinity``.
    """
    n = len(u)
    c = model.c
    F = np.zeros(n, dtype=complex)
    J = np.zeros((n, n), dtype=complex)
    for k in range(n):
        others = [j for j in range(n) if j != k]
        left = [_linear(u[k], c - x, k) for x in model.xi]
        left += [_linear(u[k] - u[j], -c, k, j) for j in others]
        right = [_linear(u[k], -x, k) for x in model.xi]
        right += [_linear(u[k] - u[j], c, k, j) for j in others]
        lv, lg = _product_with_grad(left, n)
        rv, rg = _product_with_grad(right, n)
        F[k] = lv - rv
        J[k] = lg - rg
    return F, J


def _newton(model, u0, tol, max_iter, polish: int = 4):
    """Damped Newton; after reaching ``tol`` take up to ``polish`` extra steps
    while the residual keeps dropping."""
    u = np.array(u0, dtype=complex)
    F, J = bethe_system(model, u)
    err = np.max(np.abs(F))
    extra = 0
    for _ in range(max_iter):
        if err <= tol:
            if extra >= polish:
                break
            extra += 1
        try:
            step = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            break
        lam = 1.0
        for _ in range(30):
            trial = u + lam * step
            Ft, Jt = bethe_system(model, trial)
            et = np.max(np.abs(Ft))
            if np.isfinite(et) and et < err:
                break
            lam /= 2
        else:
            break
        u, F, J, err = trial, Ft, Jt, et
    return (u, err) if err <= tol else (None, err)


def default_test_points(model: SpinChainModel, U=()):
    """Two fixed complex points away from the roots and inhomogeneities."""
    pts = []
    for base in (1.3 + 0.7j, -0.9 + 1.9j, 2.1 - 1.3j, 0.4 - 2.2j):
        z = base * (1 + max((abs(x) for x in model.xi), default=0))
        if all(abs(z - w) > 1e-3 for w in (*model.xi, *U)):
            pts.append(z)
        if len(pts) == 2:
            break
    return pts


def eigenvector_residual(model: SpinChainModel, U, z) -> float:
    """``|T(z) psi - L0 psi| / |psi|`` in max-norm for ``psi = B(U)|0>``."""
    psi = model.bethe_state(U)
    scale = np.max(np.abs(psi))
    if scale < 1e-12:
        return np.inf
    return float(np.max(np.abs(model.transfer(z) @ psi - lambda0(model, z, U) * psi)) / scale)


def _admissible(model, u, delta, bound):
    c = model.c
    if np.any(~np.isfinite(u)) or np.any(np.abs(u) > bound):
        return "escaped to infinity"
    for x in u:
        for xi in model.xi:
            if abs(x - xi) < delta:
                return "root on an inhomogeneity"
    for x, y in itertools.combinations(u, 2):
        if abs(x - y) < delta:
            return "coincident roots"
        if abs(x - y + c) < delta or abs(x - y - c) < delta:
            return "roots differ by +-c"
    return None


def _same_set(a, b, tol):
    return any(max(abs(x - y) for x, y in zip(a, perm)) < tol
               for perm in itertools.permutations(b))


def solve_bethe(model: SpinChainModel, n: int, seeds: int = 50, tol: float = 1e-12,
                seed: int = 0, max_iter: int = 200, eig_tol: float = 1e-8,
                dedup_tol: float = 1e-6, delta: float = COLLISION_DELTA,
                bound: float = 1e6, scale: float | None = None) -> SolveResult:
    """Find root sets of ``n`` Bethe equations by damped Newton from random seeds.

    A root set is kept only if the algebraic residual is below ``tol`` and
    ``B(U)|0>`` is a transfer-matrix eigenvector (relative residual below
    ``eig_tol``) at two test points. Completeness is not claimed.
    """
    if not 1 <= n <= model.L:
        raise ValueError(f"magnon count must be in 1..{model.L}")
    fmodel = model.as_float()
    rng = np.random.default_rng(seed)
    if scale is None:
        scale = 1.0 + max(abs(x) for x in fmodel.xi) + abs(fmodel.c)
    centre = np.mean(fmodel.xi) - fmodel.c / 2
    result = SolveResult()
    found: list[tuple] = []
    for r in range(seeds):
        u0 = centre + scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
        u, err = _newton(fmodel, u0, tol, max_iter)
        if u is None:
            result.failures.append(f"restart {r}: no convergence (residual {err:.3e})")
            continue
        why = _admissible(fmodel, u, delta, bound)
        if why:
            result.failures.append(f"restart {r}: rejected, {why}")
            continue
        roots = tuple(complex(x) for x in u)
        if any(_same_set(roots, f_, dedup_tol) for f_ in found):
            continue
        eig = max(eigenvector_residual(fmodel, roots, z) for z in default_test_points(fmodel, roots))
        if not eig <= eig_tol:
            result.failures.append(f"restart {r}: rejected, eigenvector residual {eig:.3e}")
            continue
        found.append(roots)
        res = tuple(float(abs(x)) for x in bethe_residuals(fmodel, roots))
        if max(res) > tol:
            result.failures.append(f"restart {r}: rejected, rational residual {max(res):.3e}")
            continue
        ordered = tuple(sorted(roots, key=lambda x: (round(x.real, 9), round(x.imag, 9))))
        result.roots.append(BetheRoots(ordered, res, eig))
    result.roots.sort(key=lambda br: [(round(x.real, 9), round(x.imag, 9)) for x in br.roots])
    if result.failures:
        log.debug("solve_bethe: %d restarts failed", len(result.failures))
    return result
