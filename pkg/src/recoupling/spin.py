"""Half-integer spin arithmetic, selection rules and exact factorials.

Spins are carried internally as twice their value (``2j``) so that integer
and half-integer quantum numbers compare exactly.  The public helpers accept
:class:`Spin` objects, ``"n"``/``"n/2"`` strings, ints, Fractions or floats
that are exact half-integers.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational, Real

__all__ = [
    "Spin",
    "SelectionRuleError",
    "as_twice",
    "parse_spin",
    "format_twice",
    "is_triangle",
    "delta_squared",
    "semiclassical_length",
    "factorial",
    "dim",
]


class SelectionRuleError(ValueError):
    """A triad of spins violates the triangle condition."""


_SPIN_RE = re.compile(r"^\s*(\d+)(?:/(2))?\s*$")


@dataclass(frozen=True, order=True)
class Spin:
    """An angular momentum quantum number stored as ``twice_j = 2j``."""

    twice_j: int

    def __post_init__(self):
        if not isinstance(self.twice_j, int) or isinstance(self.twice_j, bool):
            raise TypeError(f"twice_j must be an int, got {self.twice_j!r}")
        if self.twice_j < 0:
            raise ValueError(f"spin must be nonnegative, got 2j={self.twice_j}")

    @classmethod
    def parse(cls, text: str) -> "Spin":
        return cls(parse_spin(text))

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice_j, 2)

    @property
    def is_integer(self) -> bool:
        return self.twice_j % 2 == 0

    @property
    def length(self) -> float:
        """Semiclassical length ``j + 1/2``."""
        return (self.twice_j + 1) / 2

    def __str__(self) -> str:
        return format_twice(self.twice_j)

    def __float__(self) -> float:
        return self.twice_j / 2


def parse_spin(text: str) -> int:
    """Parse ``"n"`` or ``"n/2"`` (odd n) into a twice-value.

    >>> parse_spin("177/2"), parse_spin("35")
    (177, 70)
    """
    m = _SPIN_RE.match(text)
    if m is None:
        raise ValueError(f"not a spin: {text!r} (expected 'n' or 'n/2')")
    n = int(m.group(1))
    if m.group(2) is None:
        return 2 * n
    if n % 2 == 0:
        raise ValueError(f"not a spin: {text!r} (use the integer form for even numerators)")
    return n


def format_twice(twice: int) -> str:
    return str(twice // 2) if twice % 2 == 0 else f"{twice}/2"


def as_twice(j) -> int:
    """Coerce a spin-like value to its twice-value."""
    if isinstance(j, Spin):
        return j.twice_j
    if isinstance(j, str):
        return parse_spin(j)
    if isinstance(j, bool):
        raise TypeError("bool is not a spin")
    if isinstance(j, Rational):
        t = 2 * Fraction(j)
        if t.denominator != 1 or t < 0:
            raise ValueError(f"not a nonnegative half-integer: {j!r}")
        return int(t)
    if isinstance(j, Real):
        t = 2 * float(j)
        if not float(t).is_integer() or t < 0:
            raise ValueError(f"not a nonnegative half-integer: {j!r}")
        return int(t)
    raise TypeError(f"cannot interpret {j!r} as a spin")


def dim(j) -> int:
    """``[j] = 2j + 1``."""
    return as_twice(j) + 1


def _triangle_t(ta: int, tb: int, tc: int) -> bool:
    return (
        (ta + tb + tc) % 2 == 0
        and abs(ta - tb) <= tc <= ta + tb
    )


def is_triangle(a, b, c) -> bool:
    """True iff |a-b| <= c <= a+b and a+b+c is an integer."""
    return _triangle_t(as_twice(a), as_twice(b), as_twice(c))


# Grow-only factorial table shared by every evaluator.  Appends happen under
# the lock; readers only index entries that already exist.
_FACT = [1]
_FACT_LOCK = threading.Lock()


def _grow(n: int) -> None:
    with _FACT_LOCK:
        k = len(_FACT)
        if n < k:
            return
        acc = _FACT[-1]
        new = []
        for i in range(k, n + 1):
            acc *= i
            new.append(acc)
        _FACT.extend(new)


def factorial(n: int) -> int:
    if n < 0:
        raise ValueError(f"factorial of negative number {n}")
    if n >= len(_FACT):
        _grow(max(n, 2 * len(_FACT)))
    return _FACT[n]


def _delta2_parts(ta: int, tb: int, tc: int) -> tuple[int, int]:
    """Numerator and denominator of the triangle coefficient (twice-values)."""
    s = (ta + tb + tc) // 2
    return (
        factorial(s - tc) * factorial(s - tb) * factorial(s - ta),
        factorial(s + 1),
    )


def delta_squared(a, b, c) -> Fraction:
    """(a+b-c)! (a-b+c)! (-a+b+c)! / (a+b+c+1)!"""
    ta, tb, tc = as_twice(a), as_twice(b), as_twice(c)
    if not _triangle_t(ta, tb, tc):
        raise SelectionRuleError(
            f"({format_twice(ta)}, {format_twice(tb)}, {format_twice(tc)}) is not a triangle"
        )
    return Fraction(*_delta2_parts(ta, tb, tc))


def semiclassical_length(j) -> float:
    """j + 1/2 (hbar = 1)."""
    return (as_twice(j) + 1) / 2
