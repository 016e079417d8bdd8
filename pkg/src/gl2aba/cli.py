"""Command-line front end.

    gl2aba verify      [--suite all|rtt|twist|bethe|expansion|appendix|identities]
    gl2aba solve-bethe --magnons N
    gl2aba spectrum    --z VALUE
    gl2aba expand      --magnons N

Common flags: --config, --mode, --seed, --tolerance, --length, --magnons.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import bethe, expansion, kernel
from .config import DEFAULT_XI, SUITES, ConfigError, load_config
from .scalars import Mode, parse, serialize, to_mode
from .suite import report_json, run_suite, summary_table


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", type=Path, help="JSON run configuration")
    p.add_argument("--mode", choices=[m.value for m in Mode])
    p.add_argument("--seed", type=int)
    p.add_argument("--tolerance", type=float, help="float-mode tolerance")
    p.add_argument("--length", type=int, help="chain length, default inhomogeneities")
    p.add_argument("--magnons", type=int, nargs="+", help="magnon counts")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gl2aba", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run verification checks")
    _common(v)
    v.add_argument("--suite", choices=[*SUITES, "all"])
    v.add_argument("--report", type=Path, help="write the JSON report here")
    v.add_argument("--timings", action="store_true",
                   help="include wall times in the JSON report (breaks byte-identity)")
    v.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                   help="worker processes (default: CPU count, 1 runs in-process)")

    s = sub.add_parser("solve-bethe", help="solve the Bethe equations")
    _common(s)
    s.add_argument("--seeds", type=int, default=50, help="Newton restarts")

    sp = sub.add_parser("spectrum", help="eigenvalues of the transfer matrix")
    _common(sp)
    sp.add_argument("--z", required=True, help='spectral point, e.g. "1" or "3/2"')

    e = sub.add_parser("expand", help="partition expansion of the twisted Bethe vector")
    _common(e)
    e.add_argument("--points", help='comma-separated parameters, e.g. "3/2,-5/3" '
                   "(default: random draws)")
    return parser


def resolve_config(args):
    cfg = load_config(args.config)
    kw = {}
    if args.mode:
        kw["mode"] = Mode(args.mode)
    if args.seed is not None:
        kw["seed"] = args.seed
    if args.tolerance is not None:
        if args.tolerance <= 0:
            raise ConfigError("--tolerance", "must be positive")
        kw["tolerance"] = args.tolerance
    if args.length is not None:
        if not 1 <= args.length <= len(DEFAULT_XI):
            raise ConfigError("--length", f"must be in 1..{len(DEFAULT_XI)}")
        kw["xi"] = (DEFAULT_XI[0],) * args.length if cfg.homogeneous else DEFAULT_XI[:args.length]
    if args.magnons:
        kw["magnons"] = tuple(args.magnons)
    if getattr(args, "suite", None):
        kw["suite"] = args.suite
    from .config import validate
    return validate(replace(cfg, **kw))


def cmd_verify(args, cfg) -> int:
    reports = run_suite(cfg, jobs=args.jobs)
    print(summary_table(reports))
    if args.report:
        args.report.write_text(report_json(reports, args.timings))
    return 0 if all(r.passed for r in reports) else 1


def solve_bethe_cmd(cfg, n: int, seeds: int = 50) -> list[dict]:
    model = cfg.model().as_float()
    out = []
    for br in bethe.solve_bethe(model, n, seeds=seeds, seed=cfg.seed):
        pts = bethe.default_test_points(model, br.roots)
        out.append({"roots": [serialize(x) for x in br.roots],
                    "residual_max": br.residual_max,
                    "lambda0_at_test_points": [
                        {"z": serialize(z), "lambda0": serialize(bethe.lambda0(model, z, br.roots))}
                        for z in pts]})
    return out


def spectrum_cmd(cfg, z) -> list[complex]:
    model = cfg.model().as_float()
    z = to_mode(z, Mode.FLOAT)
    eig = np.linalg.eigvals(model.transfer(z))
    return sorted((complex(x) for x in eig), key=lambda x: (x.real, x.imag))


def expand_cmd(cfg, n: int, points=None) -> expansion.CoefficientMap:
    model, kappa = cfg.model(), cfg.twist()
    if points is None:
        rng = np.random.default_rng(cfg.seed)
        points = [to_mode(p, model.mode)
                  for p in kernel.random_rationals(rng, n, cfg.c, avoid=cfg.xi)]
    return expansion.twisted_b_expansion(model, kappa, points)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    if args.command == "verify":
        return cmd_verify(args, cfg)
    if args.command == "solve-bethe":
        rows = []
        for n in cfg.magnons:
            if n > cfg.L:
                continue
            rows.extend(solve_bethe_cmd(cfg, n, args.seeds))
        print(json.dumps(rows, indent=2))
        return 0
    if args.command == "spectrum":
        eig = spectrum_cmd(cfg, parse(args.z))
        print(json.dumps([[x.real, x.imag] for x in eig]))
        return 0
    if args.command == "expand":
        n = cfg.magnons[0]
        if args.points:
            pts = [to_mode(parse(p.strip()), cfg.mode) for p in args.points.split(",")]
        elif cfg.points:
            pts = [to_mode(p, cfg.mode) for p in cfg.points]
        else:
            pts = None
        cmap = expand_cmd(cfg, n if pts is None else len(pts), pts)
        print(f"parameters: {[serialize(x) for x in cmap.source]}")
        print(f"{'partition':<14} {'B-key':<10} {'prefactor':<18} coefficient")
        for row in cmap.table():
            print(f"{row['partition']:<14} {str(row['key']):<10} {row['prefactor']:<18} {row['coefficient']}")
        print("aggregated by surviving subset:")
        for key in sorted(cmap.entries, key=lambda k: (len(k), k)):
            print(f"  {str(list(key)):<10} {serialize(cmap.entries[key])}")
        return 0
    return 2


if __name__ == "__main__":
    raise SystemExit(main())
