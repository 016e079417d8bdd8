"""Dual-mode scalars: exact rationals (gmpy2.mpq) or complex doubles.

Plain Python ints are mode-neutral and are promoted to whichever mode the
surrounding computation uses. Everything else is strict: an exact value
never meets a float value without an explicit :func:`to_mode` call.
"""
from __future__ import annotations

import enum
import numbers
from fractions import Fraction

import numpy as np
from gmpy2 import mpq

# Pole detection threshold for float mode; exact mode uses true equality.
COLLISION_DELTA = 1e-8


class Mode(str, enum.Enum):
    EXACT = "exact"
    FLOAT = "float"


class ModeError(TypeError):
    """Exact and floating values were mixed without explicit conversion."""


class PoleError(ZeroDivisionError):
    """A rational function was evaluated at (or numerically near) a pole."""


class InvariantError(ValueError):
    """A domain object was constructed with data violating its invariants."""


MPQ_TYPE = type(mpq(0))


def mode_of(x) -> Mode | None:
    """Return the mode carried by ``x``; ``None`` for a neutral int."""
    if isinstance(x, (bool, np.bool_)):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, np.integer)):
        return None
    if isinstance(x, (MPQ_TYPE, Fraction)):
        return Mode.EXACT
    if isinstance(x, (float, complex, np.floating, np.complexfloating)):
        return Mode.FLOAT
    raise TypeError(f"unsupported scalar type {type(x).__name__}")


def common_mode(*values, default: Mode | None = None) -> Mode:
    """Mode shared by all ``values``; raises :class:`ModeError` on a mix."""
    found = None
    for v in values:
        m = mode_of(v)
        if m is None:
            continue
        if found is None:
            found = m
        elif m is not found:
            raise ModeError(f"cannot mix {found.value} and {m.value} scalars")
    if found is None:
        found = default if default is not None else Mode.EXACT
    return Mode(found)


def as_mode(x, mode: Mode):
    """Promote a neutral int to ``mode`` and check that ``x`` already lives there."""
    m = mode_of(x)
    if m is None:
        return mpq(int(x)) if mode is Mode.EXACT else complex(int(x))
    if m is not mode:
        raise ModeError(f"{x!r} is a {m.value} scalar, expected {Mode(mode).value}")
    if mode is Mode.EXACT:
        return mpq(x) if isinstance(x, Fraction) else x
    return complex(x)


def to_mode(x, mode: Mode):
    """Explicit conversion. Exact -> float is allowed; float -> exact is not."""
    mode = Mode(mode)
    m = mode_of(x)
    if m is Mode.FLOAT and mode is Mode.EXACT:
        raise ModeError("refusing to convert a floating value to an exact rational")
    if mode is Mode.FLOAT:
        if isinstance(x, (MPQ_TYPE, Fraction)):
            return complex(float(x))
        return complex(x)
    if isinstance(x, (int, np.integer)):
        return mpq(int(x))
    return mpq(x)


def Q(p, q=1):
    """Shorthand for an exact rational ``p/q``."""
    if isinstance(p, str):
        return mpq(p)
    return mpq(p, q)


def zero(mode: Mode):
    return mpq(0) if mode is Mode.EXACT else 0j


def one(mode: Mode):
    return mpq(1) if mode is Mode.EXACT else 1 + 0j


def coincide(u, v, mode: Mode, delta: float = COLLISION_DELTA) -> bool:
    """Pole test for ``u - v``: equality in exact mode, ``|u - v| < delta`` in float mode."""
    if mode is Mode.EXACT:
        return u == v
    return abs(u - v) < delta


def magnitude(x):
    """|x| as an exact rational (exact mode) or a float."""
    if isinstance(x, (MPQ_TYPE, Fraction)):
        return abs(mpq(x))
    return float(abs(x))


def max_abs(arr, mode: Mode):
    """Max-norm of an array; exact rational in exact mode, float otherwise."""
    a = np.asarray(arr)
    if a.size == 0:
        return mpq(0) if mode is Mode.EXACT else 0.0
    if mode is Mode.EXACT:
        return max(abs(x) for x in a.flat)
    return float(np.max(np.abs(a)))


def discrepancy(lhs, rhs, mode: Mode):
    """``|lhs - rhs|`` in max-norm.

    Exact mode returns the exact difference. Float mode divides by
    ``max(1, |lhs|, |rhs|)`` so large-magnitude vectors are compared relatively.
    """
    diff = max_abs(np.asarray(lhs) - np.asarray(rhs), mode)
    if mode is Mode.EXACT:
        return diff
    return diff / max(1.0, max_abs(lhs, mode), max_abs(rhs, mode))


def is_zero_residual(r) -> bool:
    return r == 0


# --- arrays -----------------------------------------------------------------

def zeros(shape, mode: Mode) -> np.ndarray:
    if mode is Mode.EXACT:
        out = np.empty(shape, dtype=object)
        out.fill(mpq(0))
        return out
    return np.zeros(shape, dtype=complex)


def eye(n: int, mode: Mode) -> np.ndarray:
    out = zeros((n, n), mode)
    for i in range(n):
        out[i, i] = one(mode)
    return out


def array_mode(a: np.ndarray) -> Mode:
    return Mode.EXACT if a.dtype == object else Mode.FLOAT


# --- serialization ----------------------------------------------------------

def serialize(x):
    """Exact -> ``"p/q"``; float -> ``[re, im]``."""
    m = mode_of(x)
    if m is Mode.FLOAT:
        z = complex(x)
        return [z.real, z.imag]
    r = mpq(x)
    return f"{r.numerator}/{r.denominator}"


def parse(obj, mode: Mode | None = None):
    """Inverse of :func:`serialize`; also accepts ``"p"``, ints and plain numbers.

    Strings are exact literals unless ``mode`` is FLOAT, in which case they
    are converted. Bare JSON numbers that are not integers are float literals.
    """
    if isinstance(obj, str):
        try:
            val = mpq(obj.strip())
        except ValueError as exc:
            raise ValueError(f"not a rational literal: {obj!r}") from exc
        return val if mode in (None, Mode.EXACT) else complex(float(val))
    if isinstance(obj, (list, tuple)):
        if len(obj) != 2:
            raise ValueError(f"complex literal must be [re, im], got {obj!r}")
        val = complex(float(obj[0]), float(obj[1]))
        if mode is Mode.EXACT:
            raise ModeError("complex literal in exact mode")
        return val
    if isinstance(obj, bool):
        raise ValueError("booleans are not scalars")
    if isinstance(obj, numbers.Integral):
        return mpq(int(obj)) if mode in (None, Mode.EXACT) else complex(int(obj))
    if isinstance(obj, numbers.Real):
        if mode is Mode.EXACT:
            raise ModeError(f"float literal {obj!r} in exact mode; write it as \"p/q\"")
        return complex(float(obj))
    raise ValueError(f"cannot parse scalar from {obj!r}")


def serialize_array(a: np.ndarray):
    return [serialize_array(row) if np.ndim(row) else serialize(row) for row in a] if a.ndim > 1 \
        else [serialize(x) for x in a]


def format_residual(r) -> str:
    """Decimal string for a residual; exact zero prints as ``"0"``."""
    if r == 0:
        return "0"
    return f"{float(abs(r)):.6e}"
