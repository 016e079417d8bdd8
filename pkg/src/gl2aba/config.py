"""Run configuration: loading, defaults and validation."""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

from gmpy2 import mpq

from .chain import MAX_SITES, SpinChainModel
from .scalars import InvariantError, Mode, ModeError, parse, serialize
from .twist import TwistMatrix

SUITES = ("identities", "rtt", "twist", "bethe", "expansion", "appendix")

# distinct, pairwise differences well inside (-1, 1)
DEFAULT_XI = (mpq(0), mpq(1, 7), mpq(-2, 5), mpq(3, 11),
              mpq(-4, 13), mpq(5, 17), mpq(-6, 19), mpq(7, 23))


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class RunConfig:
    xi: tuple = DEFAULT_XI[:4]
    c: object = mpq(1)
    homogeneous: bool = False
    kappa: tuple = ((mpq(1), mpq(1)), (mpq(1), mpq(2)))
    mode: Mode = Mode.EXACT
    seed: int = 42
    tolerance: float = 1e-10
    suite: str = "all"
    magnons: tuple = (1, 2, 3)
    draws: int = 3
    points: tuple | None = None

    @property
    def L(self) -> int:
        return len(self.xi)

    def model(self) -> SpinChainModel:
        m = SpinChainModel(self.xi, self.c, Mode.EXACT, self.homogeneous)
        return m if self.mode is Mode.EXACT else m.as_float()

    def twist(self) -> TwistMatrix:
        k = TwistMatrix.from_rows(self.kappa)
        return k if self.mode is Mode.EXACT else k.to_mode(Mode.FLOAT)

    def suites(self) -> tuple[str, ...]:
        return SUITES if self.suite == "all" else (self.suite,)

    def to_json(self) -> dict:
        out = {
            "model": {"xi": [serialize(x) for x in self.xi], "c": serialize(self.c),
                      "homogeneous": self.homogeneous},
            "twist": [[serialize(x) for x in row] for row in self.kappa],
            "mode": self.mode.value, "seed": self.seed, "tolerance": self.tolerance,
            "suite": self.suite, "magnons": list(self.magnons), "draws": self.draws,
        }
        if self.points is not None:
            out["points"] = [serialize(x) for x in self.points]
        return out


def _exact(obj, path):
    try:
        return parse(obj, Mode.EXACT)
    except (ValueError, ModeError) as exc:
        raise ConfigError(path, str(exc)) from None


def from_dict(data: dict, base: RunConfig | None = None) -> RunConfig:
    """Build a validated config; scalar literals are ``"p/q"`` strings or integers."""
    cfg = base or RunConfig()
    kw = {}
    model = data.get("model", {})
    if not isinstance(model, dict):
        raise ConfigError("model", "must be an object")
    if "c" in model:
        kw["c"] = _exact(model["c"], "model.c")
    homogeneous = bool(model.get("homogeneous", cfg.homogeneous))
    kw["homogeneous"] = homogeneous
    if "xi" in model:
        if not isinstance(model["xi"], list):
            raise ConfigError("model.xi", "must be a list")
        kw["xi"] = tuple(_exact(x, f"model.xi[{i}]") for i, x in enumerate(model["xi"]))
    elif "L" in model:
        L = model["L"]
        if not isinstance(L, int) or not 1 <= L <= MAX_SITES:
            raise ConfigError("model.L", f"must be an integer in 1..{MAX_SITES}")
        kw["xi"] = (mpq(0),) * L if homogeneous else DEFAULT_XI[:L]
    if "twist" in data:
        rows = data["twist"]
        if not (isinstance(rows, list) and len(rows) == 2 and all(isinstance(r, list) and len(r) == 2 for r in rows)):
            raise ConfigError("twist", "must be a 2x2 list")
        kw["kappa"] = tuple(tuple(_exact(x, f"twist[{i}][{j}]") for j, x in enumerate(r))
                            for i, r in enumerate(rows))
    if "mode" in data:
        try:
            kw["mode"] = Mode(data["mode"])
        except ValueError:
            raise ConfigError("mode", "must be 'exact' or 'float'") from None
    if "seed" in data:
        if not isinstance(data["seed"], int) or data["seed"] < 0:
            raise ConfigError("seed", "must be a nonnegative integer")
        kw["seed"] = data["seed"]
    if "tolerance" in data:
        tol = data["tolerance"]
        if not isinstance(tol, (int, float)) or tol <= 0:
            raise ConfigError("tolerance", "must be a positive number")
        kw["tolerance"] = float(tol)
    if "suite" in data:
        if data["suite"] not in (*SUITES, "all"):
            raise ConfigError("suite", f"must be one of {', '.join(SUITES)} or all")
        kw["suite"] = data["suite"]
    if "magnons" in data:
        mags = data["magnons"]
        mags = [mags] if isinstance(mags, int) else mags
        if not isinstance(mags, list) or not all(isinstance(n, int) and n >= 1 for n in mags):
            raise ConfigError("magnons", "must be a positive integer or a list of them")
        kw["magnons"] = tuple(mags)
    if "draws" in data:
        if not isinstance(data["draws"], int) or data["draws"] < 1:
            raise ConfigError("draws", "must be a positive integer")
        kw["draws"] = data["draws"]
    if "points" in data:
        kw["points"] = tuple(_exact(x, f"points[{i}]") for i, x in enumerate(data["points"]))
    return validate(replace(cfg, **kw))


def validate(cfg: RunConfig) -> RunConfig:
    try:
        cfg.model()
    except InvariantError as exc:
        raise ConfigError("model", str(exc)) from None
    try:
        cfg.twist()
    except InvariantError as exc:
        raise ConfigError("twist", str(exc)) from None
    if cfg.tolerance <= 0:
        raise ConfigError("tolerance", "must be positive")
    return cfg


def load_config(path: str | Path | None) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(str(path), f"invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise ConfigError(str(path), "top level must be an object")
    return from_dict(data)
