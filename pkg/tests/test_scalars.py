import json

import pytest
from fractions import Fraction
from gmpy2 import mpq

from gl2aba.scalars import (Mode, ModeError, as_mode, common_mode, format_residual,
                            parse, serialize, to_mode)


def test_exact_values_are_reduced():
    x = parse("6/-4")
    assert (x.numerator, x.denominator) == (-3, 2)
    assert serialize(x) == "-3/2"
    assert serialize(mpq(4)) == "4/1"


def test_round_trip():
    for x in (mpq(-3, 7), mpq(0), mpq(12)):
        assert parse(json.loads(json.dumps(serialize(x)))) == x
    z = 1.5 - 2.25j
    assert parse(json.loads(json.dumps(serialize(z)))) == z


def test_ints_are_neutral_everything_else_is_strict():
    assert common_mode(1, mpq(1, 2)) is Mode.EXACT
    assert common_mode(1, 0.5) is Mode.FLOAT
    assert common_mode(Fraction(1, 3)) is Mode.EXACT
    with pytest.raises(ModeError):
        common_mode(mpq(1), 1.0)
    with pytest.raises(ModeError):
        as_mode(0.5, Mode.EXACT)


def test_explicit_conversion_only_one_way():
    assert to_mode(mpq(1, 4), Mode.FLOAT) == 0.25
    with pytest.raises(ModeError):
        to_mode(0.25, Mode.EXACT)


def test_parse_rejects_float_literals_in_exact_mode():
    with pytest.raises(ModeError):
        parse(0.5, Mode.EXACT)
    assert parse(0.5) == 0.5
    assert parse("1/3", Mode.FLOAT) == pytest.approx(1 / 3)


def test_residual_format():
    assert format_residual(mpq(0)) == "0"
    assert format_residual(0.0) == "0"
    assert format_residual(mpq(1, 8)) == "1.250000e-01"
