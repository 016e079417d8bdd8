"""Verification suite: named checks, deterministic draws, JSON reports."""
from __future__ import annotations

import hashlib
import json
import time
import traceback
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import bethe, chain, expansion, kernel, twist
from .config import RunConfig
from .scalars import Mode, discrepancy, format_residual, serialize, to_mode

# on-shell checks run in floating point whatever the configured mode
ONSHELL_TOL = 1e-8


@dataclass
class CheckReport:
    name: str
    equation: str
    mode: str
    params_digest: str
    residual: str
    passed: bool
    wall_time: float | None = None
    diagnostic: str | None = None

    def to_json(self, timings: bool = False) -> dict:
        d = asdict(self)
        if not timings:
            d.pop("wall_time")
        if d["diagnostic"] is None:
            d.pop("diagnostic")
        return d


class Context:
    """Everything a check needs: config, model, twist and its own RNG stream."""

    def __init__(self, cfg: RunConfig, name: str):
        self.cfg = cfg
        self.model = cfg.model()
        self.kappa = cfg.twist()
        self.mode = self.model.mode
        self.rng = np.random.default_rng([cfg.seed, zlib.crc32(name.encode())])
        self.params: dict = {}

    def points(self, n: int, avoid=()):
        """``n`` admissible points away from the inhomogeneities (and ``avoid``)."""
        pts = kernel.random_rationals(self.rng, n, self.cfg.c,
                                      avoid=[*self.cfg.xi, *avoid])
        self.params.setdefault("points", []).append([serialize(p) for p in pts])
        return [to_mode(p, self.mode) for p in pts]

    def twists(self):
        """The configured twist followed by ``draws - 1`` random ones."""
        out = [self.kappa]
        for _ in range(self.cfg.draws - 1):
            out.append(twist.random_twist(self.rng, self.mode))
        return out

    def magnons(self, cap: int | None = None):
        cap = self.model.L if cap is None else cap
        return [n for n in self.cfg.magnons if n <= cap]


Check = Callable[[Context], object]
REGISTRY: dict[str, tuple[str, str, Check, float | None]] = {}


def check(name: str, equation: str, tol: float | None = None):
    """Register a check; ``tol`` pins a float tolerance (on-shell checks)."""
    def deco(fn):
        REGISTRY[name] = (name.split(".")[0], equation, fn, tol)
        return fn
    return deco


def _worst(values):
    values = list(values)
    return max(values) if values else 0


# --- identities -------------------------------------------------------------

def _identity(ctx: Context, which: str):
    worst = 0
    for _ in range(ctx.cfg.draws * 5):
        n = int(ctx.rng.integers(0, 7))
        z, *U = ctx.points(n + 1)
        lhs, rhs = kernel.partition_identity_residual(which, z, U, ctx.model.c)
        worst = max(worst, abs(lhs - rhs))
    return worst


for _name in ("PDF", "IdA1", "PDF1", "subsum2"):
    check(f"identities.{_name}", _name)(lambda ctx, _w=_name: _identity(ctx, _w))


@check("identities.binomial_sum", "triden")
def _binomial(ctx):
    worst = 0
    for l in range(0, 7):
        X = ctx.points(l)
        for s in range(l + 1):
            worst = max(worst, abs(kernel.binomial_partition_sum(X, s, ctx.model.c) - kernel.comb(l, s)))
    return worst


@check("identities.fgh_relations", "f,h")
def _fgh(ctx):
    c = ctx.model.c
    worst = 0
    for _ in range(ctx.cfg.draws * 5):
        u, v = ctx.points(2)
        worst = max(worst, abs(kernel.f(u, v, c) - 1 - kernel.g(u, v, c)),
                    abs(kernel.g(u, v, c) * kernel.h(u, v, c) - kernel.f(u, v, c)))
    return worst


# --- rtt --------------------------------------------------------------------

@check("rtt.yang_baxter", "Rmat")
def _ybe(ctx):
    return _worst(chain.yang_baxter_residual(*ctx.points(3), ctx.model.c) for _ in range(ctx.cfg.draws))


@check("rtt.monodromy", "RTT")
def _rtt(ctx):
    return _worst(chain.rtt_residual(ctx.model, *ctx.points(2)) for _ in range(ctx.cfg.draws))


@check("rtt.vacuum", "vac")
def _vac(ctx):
    return _worst(max(chain.vacuum_residuals(ctx.model, ctx.points(1)[0])) for _ in range(ctx.cfg.draws))


@check("rtt.transfer_commute", "trans")
def _tcomm(ctx):
    return _worst(chain.transfer_commutator(ctx.model, *ctx.points(2)) for _ in range(ctx.cfg.draws))


@check("rtt.b_commute", "shn")
def _bcomm(ctx):
    m = ctx.model
    worst = 0
    for _ in range(ctx.cfg.draws):
        u, v = ctx.points(2)
        worst = max(worst, discrepancy(m.B(u) @ m.B(v), m.B(v) @ m.B(u), ctx.mode))
    return worst


# --- twist ------------------------------------------------------------------

@check("twist.entry_formulas", "Ag,Dg,Bg")
def _entries(ctx):
    return _worst(twist.entry_formula_residual(ctx.model, k, ctx.points(1)[0]) for k in ctx.twists())


@check("twist.trace", "trans")
def _trace(ctx):
    return _worst(twist.check_trace_preservation(ctx.model, k, ctx.points(1)[0]) for k in ctx.twists())


@check("twist.vacuum_action", "Agv1")
def _tvac(ctx):
    return _worst(max(twist.check_twisted_vacuum_action(ctx.model, k, ctx.points(1)[0])) for k in ctx.twists())


@check("twist.rtt_similarity", "RTT")
def _trtt(ctx):
    return _worst(twist.general_twist_rtt_residual(ctx.model, k, k.inverse_rows, *ctx.points(2))
                  for k in ctx.twists())


@check("twist.rtt_two_sided", "RTT")
def _trtt2(ctx):
    worst = 0
    for _ in range(ctx.cfg.draws):
        k1 = [[to_mode(x, ctx.mode) for x in r] for r in twist.random_invertible(ctx.rng)]
        k2 = [[to_mode(x, ctx.mode) for x in r] for r in twist.random_invertible(ctx.rng)]
        worst = max(worst, twist.general_twist_rtt_residual(ctx.model, k1, k2, *ctx.points(2)))
    return worst


@check("twist.b_commute", "Bg")
def _tbcomm(ctx):
    m = ctx.model
    worst = 0
    for k in ctx.twists():
        u, v = ctx.points(2)
        Bu, Bv = twist.twisted_entry(m, k, "B", u), twist.twisted_entry(m, k, "B", v)
        worst = max(worst, discrepancy(Bu @ Bv, Bv @ Bu, ctx.mode))
    return worst


# --- bethe ------------------------------------------------------------------

@check("bethe.transfer_action", "ActADB")
def _act(ctx):
    worst = 0
    for n in ctx.magnons():
        for _ in range(ctx.cfg.draws):
            z, *U = ctx.points(n + 1)
            worst = max(worst, bethe.check_transfer_action(ctx.model, z, U))
    return worst


@check("bethe.twisted_transfer_action", "ActtADB")
def _tact(ctx):
    worst = 0
    for n in ctx.magnons():
        for k in ctx.twists():
            z, *U = ctx.points(n + 1)
            # same draw, same Lambdas: untwisted and twisted decompositions
            worst = max(worst, bethe.check_transfer_action(ctx.model, z, U),
                        bethe.check_twisted_transfer_action(ctx.model, k, z, U))
    return worst


@check("bethe.lambda_k", "act-trst")
def _lamk(ctx):
    worst = 0
    for n in ctx.magnons():
        z, *U = ctx.points(n + 1)
        res = bethe.bethe_residuals(ctx.model, U)
        for k in range(n):
            worst = max(worst, abs(bethe.lambda_k(ctx.model, z, U, k) - kernel.g(z, U[k], ctx.model.c) * res[k]))
    return worst


@check("bethe.magnon_grading", "ActADB")
def _grading(ctx):
    return _worst(max(bethe.magnon_grading_residuals(ctx.model, *ctx.points(2))) for _ in range(ctx.cfg.draws))


def _solved(ctx, n):
    roots = bethe.solve_bethe(ctx.model, n, seed=ctx.cfg.seed)
    ctx.params.setdefault("roots", []).append(
        [[serialize(x) for x in br.roots] for br in roots])
    return roots


@check("bethe.spectrum", "BE1,act-trst", tol=ONSHELL_TOL)
def _spectrum(ctx):
    fm = ctx.model.as_float()
    worst = 0.0
    found = 0
    for n in ctx.magnons():
        for br in _solved(ctx, n):
            found += 1
            worst = max(worst, br.residual_max, br.eigen_residual)
            for z in bethe.default_test_points(fm, br.roots):
                eig = np.linalg.eigvals(fm.transfer(z))
                lam = bethe.lambda0(fm, z, br.roots)
                worst = max(worst, float(np.min(np.abs(eig - lam))))
    if not found:
        raise RuntimeError("solver returned no root sets")
    return worst


@check("bethe.twisted_onshell", "ActtADB", tol=ONSHELL_TOL)
def _tonshell(ctx):
    fm = ctx.model.as_float()
    kf = ctx.kappa.to_mode(Mode.FLOAT)
    worst = 0.0
    for n in ctx.magnons():
        for br in _solved(ctx, n):
            for z in bethe.default_test_points(fm, br.roots):
                psi = twist.twisted_bethe_state(fm, kf, br.roots)
                r = fm.transfer(z) @ psi - bethe.lambda0(fm, z, br.roots) * psi
                worst = max(worst, float(np.max(np.abs(r)) / np.max(np.abs(psi))))
    return worst


# --- expansion --------------------------------------------------------------

def _action(ctx, which):
    worst = 0
    for n in [0, *ctx.magnons()]:
        for _ in range(ctx.cfg.draws):
            z, *U = ctx.points(n + 1)
            cmap = (expansion.act_C_on_bethe(ctx.model, z, U) if which == "C"
                    else expansion.act_diag_on_bethe(ctx.model, which, z, U))
            worst = max(worst, discrepancy(cmap.evaluate(ctx.model),
                                           expansion.direct_action(ctx.model, which, z, U), ctx.mode))
    return worst


check("expansion.act_A", "acADpar")(lambda ctx: _action(ctx, "A"))
check("expansion.act_D", "acADpar")(lambda ctx: _action(ctx, "D"))
check("expansion.act_C", "acC")(lambda ctx: _action(ctx, "C"))


@check("expansion.offshell_twisted", "OffBV1,OffBV2")
def _offbv(ctx):
    worst = 0
    for n in ctx.magnons():
        for k in ctx.twists():
            z, *U = ctx.points(n + 1)
            worst = max(worst, *expansion.check_twisted_offshell_action(ctx.model, k, z, U))
    return worst


@check("expansion.bgtob", "BgtoB")
def _bgtob(ctx):
    worst = 0
    for n in ctx.magnons():
        for k in ctx.twists():
            U = ctx.points(n)
            got = expansion.twisted_b_expansion(ctx.model, k, U).evaluate(ctx.model)
            worst = max(worst, discrepancy(got, twist.twisted_bethe_state(ctx.model, k, U), ctx.mode))
    return worst


@check("expansion.onshell_collapse", "tB-B", tol=ONSHELL_TOL)
def _collapse(ctx):
    fm = ctx.model.as_float()
    worst = 0.0
    for n in ctx.magnons():
        for br in _solved(ctx, n):
            for k in ctx.twists():
                rep = expansion.check_onshell_collapse(fm, k.to_mode(Mode.FLOAT), br)
                worst = max(worst, rep.residual, rep.constant_error, rep.subleading_max or 0.0)
    return worst


# --- appendix ---------------------------------------------------------------

def _contribution(ctx, which):
    worst = 0
    for n in ctx.magnons():
        for k in ctx.twists():
            U = ctx.points(n)
            d = expansion.lambda_contribution(ctx.model, k, U, which, "direct")
            p = expansion.lambda_contribution(ctx.model, k, U, which, "partition")
            worst = max(worst, discrepancy(d, p, ctx.mode))
    return worst


for _w, _eq in (("B", "LaB"), ("A", "LaA"), ("D", "LaD"), ("C", "LaC")):
    check(f"appendix.lambda_{_w}", f"4oper,{_eq}")(lambda ctx, _w=_w: _contribution(ctx, _w))


@check("appendix.lambda_sum", "LaABCD,form")
def _lamsum(ctx):
    worst = 0
    for n in ctx.magnons():
        for k in ctx.twists():
            worst = max(worst, expansion.check_lambda_sum(ctx.model, k, ctx.points(n)))
    return worst


# --- driver -----------------------------------------------------------------

def _digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True).encode()).hexdigest()[:16]


def run_check(cfg: RunConfig, name: str) -> CheckReport:
    _, equation, fn, fixed_tol = REGISTRY[name]
    ctx = Context(cfg, name)
    start = time.perf_counter()
    mode = Mode.FLOAT if fixed_tol is not None else ctx.mode
    try:
        residual = fn(ctx)
        if mode is Mode.EXACT:
            passed = residual == 0
        else:
            passed = bool(float(abs(residual)) <= (fixed_tol or cfg.tolerance))
        diagnostic = None
        shown = format_residual(residual)
    except Exception as exc:  # recorded as a failure, never raised
        passed, shown = False, "nan"
        diagnostic = f"{type(exc).__name__}: {exc}"
        tb = traceback.extract_tb(exc.__traceback__)[-1]
        diagnostic += f" ({tb.filename.rsplit('/', 1)[-1]}:{tb.lineno})"
    params = {"config": cfg.to_json(), **ctx.params}
    return CheckReport(name=name, equation=equation, mode=mode.value,
                       params_digest=_digest(params), residual=shown, passed=passed,
                       wall_time=time.perf_counter() - start, diagnostic=diagnostic)


def selected_checks(cfg: RunConfig) -> list[str]:
    suites = cfg.suites()
    return sorted(n for n, (s, *_) in REGISTRY.items() if s in suites)


def run_suite(cfg: RunConfig, jobs: int = 1) -> list[CheckReport]:
    """Run every check of the selected suite; order by check name.

    With ``jobs > 1`` checks are dispatched to a process pool. Each check
    owns its RNG stream, so the reports do not depend on scheduling.
    """
    names = selected_checks(cfg)
    if jobs <= 1 or len(names) <= 1:
        return [run_check(cfg, name) for name in names]
    with ProcessPoolExecutor(max_workers=min(jobs, len(names))) as pool:
        return list(pool.map(run_check, [cfg] * len(names), names))


def report_json(reports: list[CheckReport], timings: bool = False) -> str:
    return json.dumps([r.to_json(timings) for r in reports], indent=2) + "\n"


def summary_table(reports: list[CheckReport]) -> str:
    w = max((len(r.name) for r in reports), default=10)
    lines = [f"{'check':<{w}}  {'equation':<14} {'mode':<6} {'residual':>13}  {'time':>7}  result"]
    for r in reports:
        t = f"{r.wall_time:6.2f}s" if r.wall_time is not None else ""
        lines.append(f"{r.name:<{w}}  {r.equation:<14} {r.mode:<6} {r.residual:>13}  {t:>7}  "
                     f"{'PASS' if r.passed else 'FAIL'}")
        if r.diagnostic:
            lines.append(f"    {r.diagnostic}")
    n_ok = sum(r.passed for r in reports)
    lines.append(f"{n_ok}/{len(reports)} checks passed")
    return "\n".join(lines)
