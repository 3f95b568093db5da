"""Exact evaluation of Wigner 3j, 6j, 9j and 12j (first kind) symbols.

Every symbol is returned as an :class:`ExactValue`, ``coeff * sqrt(radicand)``
with rational ``coeff`` and ``radicand``.  The 9j and 12j symbols stay exact
too: in a sum over an auxiliary spin ``x`` of products of 6j symbols, each
triangle coefficient that involves ``x`` occurs squared, and the remaining
ones are the same for every ``x``, so the whole sum shares one surd.

Spin arguments accept anything :func:`recoupling.spin.as_twice` does.
Selection-rule failures give an exact zero.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache

from .spin import _delta2_parts, _triangle_t, as_twice, factorial, format_twice

__all__ = [
    "DEFAULT_DIGITS",
    "ExactValue",
    "PatternError",
    "Symbol12Args",
    "wigner3j",
    "wigner6j",
    "wigner9j",
    "wigner12j_first",
    "special_A8",
    "special_A9",
    "square_bracket",
]

DEFAULT_DIGITS = 50


class PatternError(ValueError):
    """Arguments do not have the zero pattern a special formula requires."""


# ---------------------------------------------------------------------------
# surds


def _primes_upto(n: int) -> list[int]:
    sieve = bytearray([1]) * (n + 1)
    sieve[:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [p for p, flag in enumerate(sieve) if flag]


_PRIMES = _primes_upto(4096)


def _split_square(n: int) -> tuple[int, int]:
    """Write n = s**2 * r and return (s, r), r square-free w.r.t. small primes.

    Radicands produced by the engine are ratios of factorials, so all their
    prime factors are small; a leftover cofactor is still checked for being a
    perfect square.
    """
    if n < 2:
        return 1, n
    s = 1
    for p in _PRIMES:
        if p * p > n:
            break
        pp = p * p
        while n % pp == 0:
            n //= pp
            s *= p
    r = math.isqrt(n)
    if r * r == n:
        return s * r, 1
    return s, n


def _is_rational_square(q: Fraction) -> bool:
    a, b = math.isqrt(q.numerator), math.isqrt(q.denominator)
    return a * a == q.numerator and b * b == q.denominator


@dataclass(frozen=True)
class ExactValue:
    """``coeff * sqrt(radicand)``, or a high-precision decimal fallback.

    The radicand is kept as a square-free integer (``sqrt(p/q)`` is rewritten
    as ``sqrt(p*q)/q``).  Adding two values whose radicands do not differ by
    a rational square leaves the surd field; the result then carries only
    ``fallback`` at ``digits`` significant digits.
    """

    coeff: Fraction = Fraction(0)
    radicand: Fraction = Fraction(1)
    fallback: Decimal | None = field(default=None, compare=False)
    digits: int = DEFAULT_DIGITS

    @classmethod
    def surd(cls, coeff, radicand=1, digits: int = DEFAULT_DIGITS) -> "ExactValue":
        coeff, radicand = Fraction(coeff), Fraction(radicand)
        if radicand < 0:
            raise ValueError("negative radicand")
        if coeff == 0 or radicand == 0:
            return cls(Fraction(0), Fraction(1), None, digits)
        num = radicand.numerator * radicand.denominator
        s, r = _split_square(num)
        return cls(coeff * Fraction(s, radicand.denominator), Fraction(r), None, digits)

    @classmethod
    def approx(cls, value, digits: int = DEFAULT_DIGITS) -> "ExactValue":
        with localcontext() as ctx:
            ctx.prec = digits
            return cls(Fraction(0), Fraction(1), +Decimal(value), digits)

    @property
    def is_exact(self) -> bool:
        return self.fallback is None

    def is_zero(self) -> bool:
        return self.to_decimal() == 0 if not self.is_exact else self.coeff == 0

    def sign(self) -> int:
        if self.is_exact:
            return (self.coeff > 0) - (self.coeff < 0)
        return (self.fallback > 0) - (self.fallback < 0)

    def squared(self) -> Fraction:
        """Exact square of the value (exact values only)."""
        if not self.is_exact:
            raise ValueError("square of an inexact value is not rational")
        return self.coeff * self.coeff * self.radicand

    def to_decimal(self, digits: int | None = None) -> Decimal:
        digits = digits or self.digits
        with localcontext() as ctx:
            ctx.prec = digits + 10
            if not self.is_exact:
                val = +self.fallback
            elif self.coeff == 0:
                val = Decimal(0)
            else:
                c = Decimal(self.coeff.numerator) / Decimal(self.coeff.denominator)
                r = Decimal(self.radicand.numerator) / Decimal(self.radicand.denominator)
                val = c * r.sqrt()
            ctx.prec = digits
            return +val

    def __float__(self) -> float:
        if self.is_exact:
            if self.coeff == 0:
                return 0.0
            # float(coeff) may underflow for tiny symbols; go through Decimal
            return float(self.to_decimal(20))
        return float(self.fallback)

    def _promote(self, other) -> "ExactValue":
        if isinstance(other, ExactValue):
            return other
        if isinstance(other, (int, Fraction)):
            return ExactValue.surd(other, 1, self.digits)
        return NotImplemented

    def __add__(self, other):
        other = self._promote(other)
        if other is NotImplemented:
            return other
        digits = max(self.digits, other.digits)
        if self.is_exact and other.is_exact:
            if self.coeff == 0:
                return ExactValue(other.coeff, other.radicand, None, digits)
            if other.coeff == 0:
                return ExactValue(self.coeff, self.radicand, None, digits)
            ratio = other.radicand / self.radicand
            if _is_rational_square(ratio):
                scale = Fraction(math.isqrt(ratio.numerator), math.isqrt(ratio.denominator))
                return ExactValue.surd(self.coeff + other.coeff * scale, self.radicand, digits)
        with localcontext() as ctx:
            ctx.prec = digits + 10
            total = self.to_decimal(digits + 10) + other.to_decimal(digits + 10)
        return ExactValue.approx(total, digits)

    __radd__ = __add__

    def __neg__(self):
        if self.is_exact:
            return ExactValue(-self.coeff, self.radicand, None, self.digits)
        return ExactValue(Fraction(0), Fraction(1), -self.fallback, self.digits)

    def __sub__(self, other):
        other = self._promote(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        other = self._promote(other)
        if other is NotImplemented:
            return other
        digits = max(self.digits, other.digits)
        if self.is_exact and other.is_exact:
            return ExactValue.surd(self.coeff * other.coeff, self.radicand * other.radicand, digits)
        with localcontext() as ctx:
            ctx.prec = digits + 10
            prod = self.to_decimal(digits + 10) * other.to_decimal(digits + 10)
        return ExactValue.approx(prod, digits)

    __rmul__ = __mul__

    def surd_str(self) -> str:
        if not self.is_exact:
            return "inexact"
        if self.radicand == 1:
            return str(self.coeff)
        return f"{self.coeff}*sqrt({self.radicand})"

    def __str__(self) -> str:
        return f"{self.to_decimal():.{self.digits}g} [{self.digits} digits]"


ZERO = ExactValue()


def square_bracket(j) -> int:
    """[j] = 2j + 1."""
    return as_twice(j) + 1


# ---------------------------------------------------------------------------
# Racah sums (all arguments are twice-values)


def _hyper_sum(zmin: int, zmax: int, first: Fraction, ratio) -> Fraction:
    """sum_{z=zmin}^{zmax} t_z given t_zmin and t_{z+1}/t_z = ratio(z).

    Evaluated Horner-style from the top with a single integer numerator and
    denominator, which avoids a gcd per term.
    """
    num, den = 1, 1
    for z in range(zmax - 1, zmin - 1, -1):
        p, q = ratio(z)
        num, den = q * den + p * num, q * den
    return first * Fraction(num, den)


def _racah_w(ta, tb, tc, td, te, tf) -> Fraction:
    """Rational part of {a b c; d e f}: the alternating factorial sum.

    Assumes all four triads are admissible.
    """
    a1 = (ta + tb + tc) // 2
    a2 = (ta + te + tf) // 2
    a3 = (td + tb + tf) // 2
    a4 = (td + te + tc) // 2
    b1 = (ta + tb + td + te) // 2
    b2 = (ta + tc + td + tf) // 2
    b3 = (tb + tc + te + tf) // 2
    zmin = max(a1, a2, a3, a4)
    zmax = min(b1, b2, b3)
    if zmin > zmax:
        return Fraction(0)
    den = factorial(b1 - zmin) * factorial(b2 - zmin) * factorial(b3 - zmin)
    den *= factorial(zmin - a1) * factorial(zmin - a2) * factorial(zmin - a3) * factorial(zmin - a4)
    first = Fraction((-1) ** zmin * factorial(zmin + 1), den)

    def ratio(z):
        # t_{z+1}/t_z
        return (
            -(z + 2) * (b1 - z) * (b2 - z) * (b3 - z),
            (z + 1 - a1) * (z + 1 - a2) * (z + 1 - a3) * (z + 1 - a4),
        )

    return _hyper_sum(zmin, zmax, first, ratio)


def _sixj_triads(ta, tb, tc, td, te, tf):
    return ((ta, tb, tc), (ta, te, tf), (td, tb, tf), (td, te, tc))


def _canon_triad(t):
    return tuple(sorted(t))


@lru_cache(maxsize=1 << 18)
def _w6(ta, tb, tc, td, te, tf) -> Fraction:
    # canonical ordering over the 24 classical symmetries is done by callers
    # via _sixj_key; here we only memoize.
    return _racah_w(ta, tb, tc, td, te, tf)


def _sixj_key(ta, tb, tc, td, te, tf):
    """Canonical representative of the 24-element symmetry class."""
    cols = [(ta, td), (tb, te), (tc, tf)]
    best = None
    for i, j, k in ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)):
        c = [cols[i], cols[j], cols[k]]
        for flip in ((0, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1)):
            cand = tuple(
                (c[n][1], c[n][0]) if flip[n] else c[n] for n in range(3)
            )
            if best is None or cand < best:
                best = cand
    (a, d), (b, e), (c_, f) = best
    return a, b, c_, d, e, f


def _sixj_ok(ta, tb, tc, td, te, tf) -> bool:
    return all(_triangle_t(*t) for t in _sixj_triads(ta, tb, tc, td, te, tf))


def _sixj_rational(ta, tb, tc, td, te, tf) -> Fraction:
    return _w6(*_sixj_key(ta, tb, tc, td, te, tf))


def _delta2(t) -> Fraction:
    return Fraction(*_delta2_parts(*t))


def _sum_of_sixj_products(terms, digits: int) -> ExactValue:
    """Exact sum  sum_k c_k * prod_i {6j}_{k,i}.

    ``terms`` is an iterable of ``(c_k, [sixj twice-tuples])`` with rational
    weights ``c_k``.  Triads occurring an even number of times in a product
    contribute rationally; the odd ones must be identical for all terms and
    form the shared surd.
    """
    total = Fraction(0)
    surd_triads = None
    for weight, sixjs in terms:
        if weight == 0:
            continue
        if not all(_sixj_ok(*s) for s in sixjs):
            continue
        counts = Counter()
        prod = Fraction(weight)
        for s in sixjs:
            w = _sixj_rational(*s)
            if w == 0:
                prod = Fraction(0)
                break
            prod *= w
            for t in _sixj_triads(*s):
                counts[_canon_triad(t)] += 1
        if prod == 0:
            continue
        odd = []
        for t, n in counts.items():
            if n >= 2:
                prod *= _delta2(t) ** (n // 2)
            if n % 2:
                odd.append(t)
        odd = tuple(sorted(odd))
        if surd_triads is None:
            surd_triads = odd
        elif surd_triads != odd:  # pragma: no cover - structural invariant
            raise AssertionError("terms do not share a common surd")
        total += prod
    if total == 0 or surd_triads is None:
        return ExactValue(digits=digits)
    rad = Fraction(1)
    for t in surd_triads:
        rad *= _delta2(t)
    return ExactValue.surd(total, rad, digits)


def _phase(twice_exponent: int) -> int:
    """(-1)**(twice_exponent/2); the exponent must be an integer."""
    if twice_exponent % 2:
        raise ValueError("non-integer phase exponent")
    return -1 if (twice_exponent // 2) % 2 else 1


# ---------------------------------------------------------------------------
# public symbols


def wigner3j(j1, j2, j3, m1, m2, m3, digits: int = DEFAULT_DIGITS) -> ExactValue:
    """Wigner 3j symbol.  ``m1, m2, m3`` are twice-values (integers)."""
    t1, t2, t3 = as_twice(j1), as_twice(j2), as_twice(j3)
    for tj, tm in ((t1, m1), (t2, m2), (t3, m3)):
        if not isinstance(tm, int):
            raise TypeError("m arguments are twice-value integers")
        if (tj + tm) % 2:
            raise ValueError(f"m={format_twice(abs(tm))} parity does not match j={format_twice(tj)}")
        if abs(tm) > tj:
            return ExactValue(digits=digits)
    if m1 + m2 + m3 != 0 or not _triangle_t(t1, t2, t3):
        return ExactValue(digits=digits)
    # integer combinations below are all of the form (twice + twice)/2
    k_lo = max(0, (t2 - t3 - m1) // 2, (t1 - t3 + m2) // 2)
    k_hi = min((t1 + t2 - t3) // 2, (t1 - m1) // 2, (t2 + m2) // 2)
    if k_lo > k_hi:
        return ExactValue(digits=digits)
    c1 = (t3 - t2 + m1) // 2
    c2 = (t3 - t1 - m2) // 2
    c3 = (t1 + t2 - t3) // 2
    c4 = (t1 - m1) // 2
    c5 = (t2 + m2) // 2
    k = k_lo
    den = (factorial(k) * factorial(c1 + k) * factorial(c2 + k)
           * factorial(c3 - k) * factorial(c4 - k) * factorial(c5 - k))
    first = Fraction((-1) ** k, den)

    def ratio(k):
        return (-(c3 - k) * (c4 - k) * (c5 - k), (k + 1) * (c1 + k + 1) * (c2 + k + 1))

    s = _hyper_sum(k_lo, k_hi, first, ratio)
    rad = _delta2((t1, t2, t3))
    for tj, tm in ((t1, m1), (t2, m2), (t3, m3)):
        rad *= factorial((tj + tm) // 2) * factorial((tj - tm) // 2)
    sign = _phase(t1 - t2 - m3)
    return ExactValue.surd(sign * s, rad, digits)


def wigner6j(a, b, c, d, e, f, digits: int = DEFAULT_DIGITS) -> ExactValue:
    """{a b c; d e f} by the Racah single sum."""
    t = tuple(as_twice(x) for x in (a, b, c, d, e, f))
    if not _sixj_ok(*t):
        return ExactValue(digits=digits)
    w = _sixj_rational(*t)
    rad = Fraction(1)
    for tri in _sixj_triads(*t):
        rad *= _delta2(tri)
    return ExactValue.surd(w, rad, digits)


def _x_range(*pairs):
    """Twice-values of x allowed by every (p, q, x) triangle."""
    lo = max(abs(p - q) for p, q in pairs)
    hi = min(p + q for p, q in pairs)
    par = {(p + q) % 2 for p, q in pairs}
    if len(par) != 1:
        return range(0)
    if lo % 2 != par.pop():
        lo += 1
    return range(lo, hi + 1, 2)


def wigner9j(a, b, c, d, e, f, g, h, i, digits: int = DEFAULT_DIGITS) -> ExactValue:
    """{a b c; d e f; g h i} as sum_x (-1)^{2x} [x] {a b c; f i x}{d e f; b x h}{g h i; x a d}."""
    ta, tb, tc, td, te, tf, tg, th, ti = (as_twice(x) for x in (a, b, c, d, e, f, g, h, i))
    for tri in ((ta, tb, tc), (td, te, tf), (tg, th, ti), (ta, td, tg), (tb, te, th), (tc, tf, ti)):
        if not _triangle_t(*tri):
            return ExactValue(digits=digits)

    def terms():
        for tx in _x_range((ta, ti), (td, th), (tb, tf)):
            weight = (tx + 1) * (-1 if tx % 2 else 1)
            yield weight, [
                (ta, tb, tc, tf, ti, tx),
                (td, te, tf, tb, tx, th),
                (tg, th, ti, tx, ta, td),
            ]

    return _sum_of_sixj_products(terms(), digits)


# ---------------------------------------------------------------------------
# 12j of the first kind

_FIELDS12 = ("j1", "s2", "j12", "j346", "j3", "j4", "j34", "j135", "j13", "j24", "j5", "j6")


@dataclass(frozen=True)
class Symbol12Args:
    """Twice-values of the twelve spins, laid out as::

        { j1   s2   j12  j346 }
        { j3   j4   j34  j135 }
        { j13  j24  j5   j6   }

    The eight coupling triads are (j1 s2 j12), (j3 j4 j34), (j34 j6 j346),
    (j12 j346 j5), (j1 j3 j13), (j13 j5 j135), (s2 j4 j24), (j135 j24 j6).
    """

    j1: int
    s2: int
    j12: int
    j346: int
    j3: int
    j4: int
    j34: int
    j135: int
    j13: int
    j24: int
    j5: int
    j6: int

    def __post_init__(self):
        for name in _FIELDS12:
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise ValueError(f"{name} must be a nonnegative twice-value, got {v!r}")

    @classmethod
    def from_spins(cls, *spins) -> "Symbol12Args":
        """Twelve spins in row order, as anything :func:`as_twice` accepts."""
        if len(spins) == 1:
            spins = tuple(spins[0])
        if len(spins) != 12:
            raise ValueError(f"need 12 spins, got {len(spins)}")
        return cls(*(as_twice(s) for s in spins))

    @classmethod
    def from_mapping(cls, m) -> "Symbol12Args":
        return cls(**{k: as_twice(m[k]) for k in _FIELDS12})

    def as_tuple(self) -> tuple:
        return tuple(getattr(self, k) for k in _FIELDS12)

    def rows(self):
        t = self.as_tuple()
        return t[0:4], t[4:8], t[8:12]

    def replace(self, **kw) -> "Symbol12Args":
        d = {k: getattr(self, k) for k in _FIELDS12}
        d.update({k: as_twice(v) for k, v in kw.items()})
        return Symbol12Args(**d)

    def triads(self):
        return (
            (self.j1, self.s2, self.j12),
            (self.j3, self.j4, self.j34),
            (self.j34, self.j6, self.j346),
            (self.j12, self.j346, self.j5),
            (self.j1, self.j3, self.j13),
            (self.j13, self.j5, self.j135),
            (self.s2, self.j4, self.j24),
            (self.j135, self.j24, self.j6),
        )

    def admissible(self) -> bool:
        return all(_triangle_t(*t) for t in self.triads())

    def __str__(self) -> str:
        return " / ".join(" ".join(format_twice(t) for t in row) for row in self.rows())


def _as_args(args) -> Symbol12Args:
    if isinstance(args, Symbol12Args):
        return args
    if isinstance(args, dict):
        return Symbol12Args.from_mapping(args)
    return Symbol12Args.from_spins(*args)


def wigner12j_first(args, digits: int = DEFAULT_DIGITS) -> ExactValue:
    """12j symbol of the first kind.

    Single sum over x of four 6j symbols,

        (-1)^(R - x) [x] {a1 c1 x; c2 a2 b1}{a2 c2 x; c3 a3 b2}
                         {a3 c3 x; c4 a4 b3}{a4 c4 x; a1 c1 b4}

    with R the sum of all twelve spins.  The labels are assigned so that the
    small spin s2 pairs with j3 in the sum, which then runs over at most
    2*s2 + 1 values, and j5 enters only one of the four 6j symbols.
    """
    p = _as_args(args)
    if not p.admissible():
        return ExactValue(digits=digits)
    a1, a2, a3, a4 = p.j3, p.j13, p.j135, p.j24
    b1, b2, b3, b4 = p.j1, p.j5, p.j6, p.j4
    c1, c2, c3, c4 = p.s2, p.j12, p.j346, p.j34
    R = sum(p.as_tuple())

    def terms():
        for tx in _x_range((a1, c1), (a2, c2), (a3, c3), (a4, c4)):
            yield (tx + 1) * _phase(R - tx), [
                (a1, c1, tx, c2, a2, b1),
                (a2, c2, tx, c3, a3, b2),
                (a3, c3, tx, c4, a4, b3),
                (a4, c4, tx, a1, c1, b4),
            ]

    return _sum_of_sixj_products(terms(), digits)


def special_A8(args, digits: int = DEFAULT_DIGITS) -> ExactValue:
    """Closed form of the 12j when s2 = 0 (so j12 = j1 and j24 = j4).

    (-1)^(j1 + 2 j3 + j4 + j346 + j135 + j5 + j6) / sqrt([j1][j4])
        * {j346 j3 j135; j4 j6 j34} {j346 j3 j135; j13 j5 j1}
    """
    p = _as_args(args)
    if p.s2 != 0 or p.j12 != p.j1 or p.j24 != p.j4:
        raise PatternError("special_A8 needs s2 = 0, j12 = j1, j24 = j4")
    if not p.admissible():
        return ExactValue(digits=digits)
    ph = _phase(p.j1 + 2 * p.j3 + p.j4 + p.j346 + p.j135 + p.j5 + p.j6)
    h = Fraction(1, 2)
    a = wigner6j(*(h * t for t in (p.j346, p.j3, p.j135, p.j4, p.j6, p.j34)), digits=digits)
    b = wigner6j(*(h * t for t in (p.j346, p.j3, p.j135, p.j13, p.j5, p.j1)), digits=digits)
    return a * b * ExactValue.surd(ph, Fraction(1, (p.j1 + 1) * (p.j4 + 1)), digits)


def special_A9(args, digits: int = DEFAULT_DIGITS) -> ExactValue:
    """Closed form of the 12j when j5 = 0 (so j346 = j12 and j135 = j13).

    1/sqrt([j12][j13]) * {j1 s2 j12; j3 j4 j34; j13 j24 j6}
    """
    p = _as_args(args)
    if p.j5 != 0 or p.j346 != p.j12 or p.j135 != p.j13:
        raise PatternError("special_A9 needs j5 = 0, j346 = j12, j135 = j13")
    if not p.admissible():
        return ExactValue(digits=digits)
    h = Fraction(1, 2)
    n = wigner9j(*(h * t for t in (p.j1, p.s2, p.j12, p.j3, p.j4, p.j34, p.j13, p.j24, p.j6)),
                 digits=digits)
    return n * ExactValue.surd(1, Fraction(1, (p.j12 + 1) * (p.j13 + 1)), digits)
