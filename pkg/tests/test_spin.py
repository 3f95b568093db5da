from fractions import Fraction

import pytest

from recoupling.spin import (
    Spin,
    as_twice,
    delta_squared,
    dim,
    factorial,
    format_twice,
    is_triangle,
    parse_spin,
    semiclassical_length,
)


@pytest.mark.parametrize("text,twice", [("0", 0), ("35", 70), ("1/2", 1), ("177/2", 177)])
def test_parse_round_trip(text, twice):
    assert parse_spin(text) == twice
    assert format_twice(twice) == text


@pytest.mark.parametrize("bad", ["", "-1", "3/4", "4/2", "x", "1.5"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_spin(bad)


def test_as_twice_accepts_several_forms():
    assert as_twice(Spin(5)) == 5
    assert as_twice("5/2") == 5
    assert as_twice(Fraction(5, 2)) == 5
    assert as_twice(2.5) == 5
    assert as_twice(3) == 6
    with pytest.raises(ValueError):
        as_twice(Fraction(1, 3))
    with pytest.raises(TypeError):
        as_twice(True)


def test_spin_properties():
    s = Spin.parse("7/2")
    assert s.value == Fraction(7, 2)
    assert not s.is_integer
    assert s.length == 4.0
    assert str(s) == "7/2"
    assert float(s) == 3.5
    assert dim(s) == 8
    assert semiclassical_length("7/2") == 4.0
    with pytest.raises(ValueError):
        Spin(-1)


def test_triangle():
    assert is_triangle(1, 1, 2)
    assert is_triangle("1/2", "1/2", 0)
    assert not is_triangle(1, 1, 3)
    assert not is_triangle("1/2", 1, 1)


def test_factorial_and_delta():
    assert factorial(20) == 2432902008176640000
    # Delta(1,1,1) = 1! 1! 1! / 4!
    assert delta_squared(1, 1, 1) == Fraction(1, 24)
    assert delta_squared("1/2", "1/2", 0) == Fraction(1, 2)
