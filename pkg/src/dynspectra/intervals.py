"""Closed intervals with exact rational endpoints.

Every quantity that cannot be represented exactly (continued-fraction
tails, truncated series, irrational surds) is carried as an `Interval`
whose endpoints are `fractions.Fraction`. Comparisons are three-valued:
a strict comparison between overlapping intervals is undecided and
returns None.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Optional, Union

Number = Union[int, Fraction]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r}")
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to Fraction")


def floor_dyadic(x: Fraction, bits: int) -> Fraction:
    return Fraction(math.floor(x * (1 << bits)), 1 << bits)


def ceil_dyadic(x: Fraction, bits: int) -> Fraction:
    return Fraction(math.ceil(x * (1 << bits)), 1 << bits)


def decimal_string(x: Fraction, digits: int = 12, rounding: str = "floor") -> str:
    """Render a rational as a fixed-point decimal string.

    The string is derived from the exact value by integer arithmetic;
    `rounding` is "floor" or "ceil" so enclosures stay outward-rounded.
    """
    x = as_fraction(x)
    scale = 10**digits
    scaled = x * scale
    n = math.floor(scaled) if rounding == "floor" else math.ceil(scaled)
    sign = "-" if n < 0 else ""
    n = abs(n)
    whole, frac = divmod(n, scale)
    if digits == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{digits}d}"


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = as_fraction(self.lo), as_fraction(self.hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x) -> "Interval":
        x = as_fraction(x)
        return cls(x, x)

    @classmethod
    def hull(cls, items: Iterable["Interval"]) -> "Interval":
        items = list(items)
        if not items:
            raise ValueError("hull of no intervals")
        return cls(min(i.lo for i in items), max(i.hi for i in items))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def contains(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        if isinstance(x, float):
            return float(self.lo) <= x <= float(self.hi)
        x = as_fraction(x)
        return self.lo <= x <= self.hi

    __contains__ = contains

    def overlaps(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def certainly_lt(self, other: "Interval") -> Optional[bool]:
        """True if every point is below every point of `other`, False if
        the opposite non-strict ordering is certain, None otherwise."""
        if self.hi < other.lo:
            return True
        if self.lo >= other.hi:
            return False
        return None

    def certainly_le(self, other: "Interval") -> Optional[bool]:
        if self.hi <= other.lo:
            return True
        if self.lo > other.hi:
            return False
        return None

    def __add__(self, other) -> "Interval":
        if isinstance(other, Interval):
            return Interval(self.lo + other.lo, self.hi + other.hi)
        c = as_fraction(other)
        return Interval(self.lo + c, self.hi + c)

    __radd__ = __add__

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other) -> "Interval":
        if isinstance(other, Interval):
            return Interval(self.lo - other.hi, self.hi - other.lo)
        return self + (-as_fraction(other))

    def __rsub__(self, other) -> "Interval":
        return (-self) + other

    def __mul__(self, other) -> "Interval":
        if isinstance(other, Interval):
            products = [self.lo * other.lo, self.lo * other.hi,
                        self.hi * other.lo, self.hi * other.hi]
            return Interval(min(products), max(products))
        c = as_fraction(other)
        a, b = self.lo * c, self.hi * c
        return Interval(min(a, b), max(a, b))

    __rmul__ = __mul__

    def abs(self) -> "Interval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(0, max(-self.lo, self.hi))

    def max(self, other: "Interval") -> "Interval":
        return Interval(max(self.lo, other.lo), max(self.hi, other.hi))

    def min(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), min(self.hi, other.hi))

    def dyadic(self, bits: int = 64) -> "Interval":
        """Outward-rounded copy with dyadic endpoints of `bits` fractional bits."""
        return Interval(floor_dyadic(self.lo, bits), ceil_dyadic(self.hi, bits))

    def to_json(self, digits: int = 12) -> dict:
        return {
            "lo": {"num": self.lo.numerator, "den": self.lo.denominator},
            "hi": {"num": self.hi.numerator, "den": self.hi.denominator},
            "lo_decimal": decimal_string(self.lo, digits, "floor"),
            "hi_decimal": decimal_string(self.hi, digits, "ceil"),
        }

    def __float__(self) -> float:
        return float(self.mid)

    def __repr__(self) -> str:
        if self.is_exact:
            return f"Interval({self.lo})"
        return f"Interval([{float(self.lo):.12g}, {float(self.hi):.12g}])"


DyadicInterval = Interval


def interval_max(items: Iterable[Interval]) -> Interval:
    items = list(items)
    if not items:
        raise ValueError("max of no intervals")
    return Interval(max(i.lo for i in items), max(i.hi for i in items))


def sqrt_interval(n: Fraction, bits: int = 96) -> Interval:
    """Rigorous enclosure of sqrt(n) for rational n >= 0 using integer isqrt."""
    n = as_fraction(n)
    if n < 0:
        raise ValueError("negative radicand")
    num, den = n.numerator, n.denominator
    # sqrt(num/den) = sqrt(num*den)/den
    scale = 1 << bits
    s = math.isqrt(num * den * scale * scale)
    lo = Fraction(s, den * scale)
    hi = lo if s * s == num * den * scale * scale else Fraction(s + 1, den * scale)
    return Interval(lo, hi)
