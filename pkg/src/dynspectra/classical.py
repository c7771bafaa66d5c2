"""Continued fractions, quadratic surds and the classical spectrum below 3.

All values are exact: a periodic continued fraction evaluates to a
`QuadraticSurd` (p + q*sqrt(d))/r, and comparisons reduce to integer
arithmetic. Sums of surds with different radicands are carried by
`SurdSum`, whose sign is decided exactly (square roots of distinct
squarefree integers are linearly independent over Q) and whose decimal
value is refined until it separates from zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Sequence

from .intervals import Interval, as_fraction, decimal_string, sqrt_interval


def squarefree_split(n: int) -> tuple[int, int]:
    """Return (f, d) with n == f*f*d and d squarefree (n > 0)."""
    if n <= 0:
        raise ValueError("n must be positive")
    f, d = 1, 1
    m = n
    p = 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        f *= p ** (e // 2)
        if e % 2:
            d *= p
        p += 1 if p == 2 else 2
    d *= m
    return f, d


@total_ordering
@dataclass(frozen=True, eq=False)
class QuadraticSurd:
    """The real number (p + q*sqrt(d))/r in canonical form.

    Canonical form: r > 0, gcd(p, q, r) = 1, d squarefree and > 1. A
    rational value is stored with q = 0 and d = 1.
    """

    p: int
    q: int
    d: int
    r: int

    def __post_init__(self):
        p, q, d, r = int(self.p), int(self.q), int(self.d), int(self.r)
        if r == 0:
            raise ZeroDivisionError("denominator r = 0")
        if d < 0:
            raise ValueError("radicand must be nonnegative")
        if d == 0:
            q, d = 0, 1
        else:
            f, d = squarefree_split(d)
            q *= f
        if d == 1:
            p, q = p + q, 0
        if q == 0:
            d = 1
        if r < 0:
            p, q, r = -p, -q, -r
        g = math.gcd(math.gcd(p, q), r)
        if g > 1:
            p, q, r = p // g, q // g, r // g
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "r", r)

    @classmethod
    def rational(cls, x) -> "QuadraticSurd":
        x = as_fraction(x)
        return cls(x.numerator, 0, 1, x.denominator)

    @classmethod
    def sqrt(cls, x) -> "QuadraticSurd":
        """sqrt of a nonnegative rational."""
        x = as_fraction(x)
        # sqrt(a/b) = sqrt(a*b)/b
        return cls(0, 1, x.numerator * x.denominator, x.denominator)

    @property
    def is_rational(self) -> bool:
        return self.q == 0

    def _coerce(self, other) -> "QuadraticSurd":
        if isinstance(other, QuadraticSurd):
            return other
        return QuadraticSurd.rational(other)

    def _common(self, other: "QuadraticSurd") -> int:
        if self.is_rational:
            return other.d
        if other.is_rational or other.d == self.d:
            return self.d
        raise ValueError(f"mixed radicals sqrt({self.d}) and sqrt({other.d}); use SurdSum")

    def __add__(self, other):
        if isinstance(other, SurdSum):
            return NotImplemented
        o = self._coerce(other)
        d = self._common(o)
        return QuadraticSurd(self.p * o.r + o.p * self.r, self.q * o.r + o.q * self.r, d, self.r * o.r)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticSurd(-self.p, -self.q, self.d, self.r)

    def __sub__(self, other):
        if isinstance(other, SurdSum):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        d = self._common(o)
        p = self.p * o.p + self.q * o.q * d
        q = self.p * o.q + self.q * o.p
        return QuadraticSurd(p, q, d, self.r * o.r)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadraticSurd":
        return QuadraticSurd(self.p, -self.q, self.d, self.r)

    def norm(self) -> Fraction:
        return Fraction(self.p * self.p - self.q * self.q * self.d, self.r * self.r)

    def reciprocal(self) -> "QuadraticSurd":
        # r/(p + q sqrt d) = r (p - q sqrt d)/(p^2 - q^2 d)
        den = self.p * self.p - self.q * self.q * self.d
        if den == 0:
            raise ZeroDivisionError("reciprocal of zero")
        return QuadraticSurd(self.r * self.p, -self.r * self.q, self.d, den)

    def __truediv__(self, other):
        return self * self._coerce(other).reciprocal()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.reciprocal()

    def sign(self) -> int:
        """Sign of p + q sqrt(d) by integer arithmetic only."""
        p, q = self.p, self.q
        sp = (p > 0) - (p < 0)
        sq = (q > 0) - (q < 0)
        if sq == 0:
            return sp
        if sp == 0 or sp == sq:
            return sq
        # opposite signs: compare p^2 with q^2 d
        lhs, rhs = p * p, q * q * self.d
        if lhs == rhs:
            return 0
        return sp if lhs > rhs else sq

    def __eq__(self, other) -> bool:
        if isinstance(other, SurdSum):
            return SurdSum.of(self) == other
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return (self.p, self.q, self.d, self.r) == (o.p, o.q, o.d, o.r)

    def __hash__(self) -> int:
        return hash((self.p, self.q, self.d, self.r))

    def __lt__(self, other) -> bool:
        if isinstance(other, SurdSum):
            return SurdSum.of(self) < other
        o = self._coerce(other)
        if self.is_rational or o.is_rational or self.d == o.d:
            return (self - o).sign() < 0
        return (SurdSum.of(self) - SurdSum.of(o)).sign() < 0

    def floor(self) -> int:
        # floor((p + q sqrt d)/r) via isqrt of q^2 d
        if self.q == 0:
            return self.p // self.r
        s = math.isqrt(self.q * self.q * self.d)
        if self.q > 0:
            num_lo = self.p + s  # floor(p + q sqrt d) when sqrt not exact
        else:
            num_lo = self.p - s - (0 if s * s == self.q * self.q * self.d else 1)
        return num_lo // self.r

    def enclose(self, bits: int = 96) -> Interval:
        if self.q == 0:
            return Interval.point(Fraction(self.p, self.r))
        root = sqrt_interval(Fraction(self.q * self.q * self.d), bits)
        if self.q > 0:
            return Interval((self.p + root.lo) / self.r, (self.p + root.hi) / self.r)
        return Interval((self.p - root.hi) / self.r, (self.p - root.lo) / self.r)

    def decimal(self, digits: int = 12) -> str:
        """Truncated decimal expansion computed from the exact value."""
        scale = 10**digits
        neg = self.sign() < 0
        v = -self if neg else self
        n = QuadraticSurd(v.p * scale, v.q * scale, v.d, v.r).floor()
        whole, frac = divmod(n, scale)
        sign = "-" if neg else ""
        return f"{sign}{whole}.{frac:0{digits}d}" if digits else f"{sign}{whole}"

    def __float__(self) -> float:
        return float(self.enclose(64).mid)

    def to_json(self) -> dict:
        return {"p": self.p, "q": self.q, "d": self.d, "r": self.r}

    def __repr__(self) -> str:
        if self.q == 0:
            return f"QuadraticSurd({Fraction(self.p, self.r)})"
        return f"QuadraticSurd(({self.p} + {self.q}*sqrt({self.d}))/{self.r})"


class SurdSum:
    """Q-linear combination of square roots of squarefree integers."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[int, Fraction]):
        self.terms = {d: Fraction(c) for d, c in terms.items() if c != 0}

    @classmethod
    def of(cls, x) -> "SurdSum":
        if isinstance(x, SurdSum):
            return x
        if isinstance(x, QuadraticSurd):
            terms = {1: Fraction(x.p, x.r)}
            if x.q:
                terms[x.d] = terms.get(x.d, 0) + Fraction(x.q, x.r)
            return cls(terms)
        return cls({1: as_fraction(x)})

    def __add__(self, other) -> "SurdSum":
        o = SurdSum.of(other)
        out = dict(self.terms)
        for d, c in o.terms.items():
            out[d] = out.get(d, 0) + c
        return SurdSum(out)

    __radd__ = __add__

    def __neg__(self) -> "SurdSum":
        return SurdSum({d: -c for d, c in self.terms.items()})

    def __sub__(self, other) -> "SurdSum":
        return self + (-SurdSum.of(other))

    def __rsub__(self, other) -> "SurdSum":
        return SurdSum.of(other) - self

    def enclose(self, bits: int = 96) -> Interval:
        total = Interval.point(0)
        for d, c in self.terms.items():
            total = total + (Interval.point(1) if d == 1 else sqrt_interval(Fraction(d), bits)) * c
        return total

    def sign(self) -> int:
        if not self.terms:
            return 0
        bits = 64
        while True:
            iv = self.enclose(bits)
            if iv.lo > 0:
                return 1
            if iv.hi < 0:
                return -1
            bits *= 2

    def __eq__(self, other) -> bool:
        return not (self - SurdSum.of(other)).terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __lt__(self, other) -> bool:
        return (self - SurdSum.of(other)).sign() < 0

    def __le__(self, other) -> bool:
        return (self - SurdSum.of(other)).sign() <= 0

    def __gt__(self, other) -> bool:
        return (self - SurdSum.of(other)).sign() > 0

    def __ge__(self, other) -> bool:
        return (self - SurdSum.of(other)).sign() >= 0

    def floor_scaled(self, scale: int) -> int:
        """floor(scale * self), exact: irrational sums are never integers."""
        if set(self.terms) <= {1}:
            return math.floor(self.terms.get(1, Fraction(0)) * scale)
        bits = 64
        while True:
            iv = self.enclose(bits)
            lo, hi = math.floor(iv.lo * scale), math.floor(iv.hi * scale)
            if lo == hi:
                return lo
            bits *= 2

    def decimal(self, digits: int = 12) -> str:
        scale = 10**digits
        neg = self.sign() < 0
        n = (-self if neg else self).floor_scaled(scale)
        whole, frac = divmod(n, scale)
        sign = "-" if neg else ""
        return f"{sign}{whole}.{frac:0{digits}d}" if digits else f"{sign}{whole}"

    def __float__(self) -> float:
        return float(self.enclose(64).mid)

    def to_json(self) -> dict:
        return {"terms": [{"radicand": d, "num": c.numerator, "den": c.denominator}
                          for d, c in sorted(self.terms.items())]}

    def __repr__(self) -> str:
        parts = [f"{c}" if d == 1 else f"{c}*sqrt({d})" for d, c in sorted(self.terms.items())]
        return "SurdSum(" + " + ".join(parts or ["0"]) + ")"


# ---------------------------------------------------------------------------
# Continued fractions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContinuedFraction:
    """[a_0; a_1, ...] with a finite preperiod followed by a repeating period."""

    preperiod: tuple = ()
    period: tuple = (1,)

    def __post_init__(self):
        pre, per = tuple(int(a) for a in self.preperiod), tuple(int(a) for a in self.period)
        if not per:
            raise ValueError("period must be nonempty")
        if any(a < 1 for a in per) or any(a < 1 for a in pre[1:]):
            raise ValueError("partial quotients must be >= 1 (except a_0)")
        if pre and pre[0] < 0:
            raise ValueError("a_0 must be >= 0")
        if not pre and per[0] < 1:
            raise ValueError("a_0 must be >= 1 in a purely periodic expansion")
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    def terms(self, n: int) -> list[int]:
        out = list(self.preperiod[:n])
        i = 0
        while len(out) < n:
            out.append(self.period[i % len(self.period)])
            i += 1
        return out


def _mobius(quotients: Sequence[int]) -> tuple[int, int, int, int]:
    """Matrix [[p, p'], [q, q']] with [a_0; ..., a_k, x] = (p x + p')/(q x + q')."""
    p, pp, q, qp = 1, 0, 0, 1
    for a in quotients:
        p, pp = a * p + pp, p
        q, qp = a * q + qp, q
    return p, pp, q, qp


def purely_periodic_value(period: Sequence[int]) -> QuadraticSurd:
    """The positive fixed point of x = [a_0; a_1, ..., a_{s-1}, x]."""
    p, pp, q, qp = _mobius(period)
    # q x^2 + (qp - p) x - pp = 0, positive root
    disc = (p - qp) ** 2 + 4 * pp * q
    if q == 0:
        raise ValueError("degenerate period")
    return QuadraticSurd(p - qp, 1, disc, 2 * q)


def cf_eval(cf: ContinuedFraction) -> QuadraticSurd:
    """Exact value of an eventually periodic continued fraction."""
    x = purely_periodic_value(cf.period)
    if not cf.preperiod:
        return x
    p, pp, q, qp = _mobius(cf.preperiod)
    return (x * p + pp) / (x * q + qp)


def cf_convergent(quotients: Sequence[int]) -> Fraction:
    p, pp, q, qp = _mobius(quotients)
    return Fraction(p, q)


def tail_pair(period: Sequence[int], n: int) -> tuple[QuadraticSurd, QuadraticSurd]:
    """(alpha_n, beta_n) for the bi-infinite periodic sequence of partial quotients."""
    s = len(period)
    forward = [period[(n + i) % s] for i in range(s)]
    backward = [period[(n - 1 - i) % s] for i in range(s)]
    alpha = purely_periodic_value(forward)
    beta = purely_periodic_value(backward).reciprocal()
    return alpha, beta


def lagrange_number(period: Sequence[int]) -> QuadraticSurd:
    """max over rotations of alpha_n + beta_n for the periodic sequence."""
    period = tuple(int(a) for a in period)
    if not period or any(a < 1 for a in period):
        raise ValueError("period must be a nonempty list of positive integers")
    best = None
    for n in range(len(period)):
        alpha, beta = tail_pair(period, n)
        v = alpha + beta
        if best is None or v > best:
            best = v
    return best


# ---------------------------------------------------------------------------
# Markov triples
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class MarkovTriple:
    x: int
    y: int
    z: int

    def __post_init__(self):
        if not (0 < self.x <= self.y <= self.z):
            raise ValueError("need 0 < x <= y <= z")
        if self.x ** 2 + self.y ** 2 + self.z ** 2 != 3 * self.x * self.y * self.z:
            raise ValueError(f"({self.x}, {self.y}, {self.z}) is not a Markov triple")

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.x, self.y, self.z)


def markov_triples(z_max: int) -> list[MarkovTriple]:
    """All Markov triples with largest entry <= z_max, sorted by z.

    Walks the tree of Vieta involutions from (1, 1, 1); each mutation
    (x, y, z) -> (x, z, 3xz - y), (y, z, 3yz - x) strictly increases the
    largest entry past the root, so the walk can stop at z_max.
    """
    if z_max < 1:
        raise ValueError("z_max must be >= 1")
    seen = {(1, 1, 1)}
    stack = [(1, 1, 1)]
    while stack:
        x, y, z = stack.pop()
        for child in ((x, z, 3 * x * z - y), (y, z, 3 * y * z - x)):
            t = tuple(sorted(child))
            if t[2] <= z_max and t not in seen:
                seen.add(t)
                stack.append(t)
    return sorted((MarkovTriple(*t) for t in seen), key=lambda m: (m.z, m.y, m.x))


def markov_numbers(z_max: int) -> list[int]:
    return sorted({t.z for t in markov_triples(z_max)})


def classical_lagrange_below_3(z_max: int) -> list[QuadraticSurd]:
    """sqrt(9 - 4/z^2) for every Markov number z <= z_max, increasing."""
    return [QuadraticSurd(0, 1, 9 * z * z - 4, z) for z in markov_numbers(z_max)]


def markov_periods(z_max: int) -> dict[int, tuple[int, ...]]:
    """A periodic partial-quotient word for each Markov number z <= z_max.

    Built by concatenation on the Markov tree: the triple (1, 5, 2) carries
    the words (11, 1122, 22) and a node (u, uv, v) has children
    (u, u.uv, uv) and (uv, uv.v, v). The Lagrange number of the word for z
    is sqrt(9 - 4/z^2).
    """
    out: dict[int, tuple[int, ...]] = {1: (1, 1), 2: (2, 2)}
    if z_max < 5:
        return {z: w for z, w in out.items() if z <= z_max}
    stack = [((1, (1, 1)), (5, (1, 1, 2, 2)), (2, (2, 2)))]
    while stack:
        (x, u), (m, uv), (y, v) = stack.pop()
        if m > z_max:
            continue
        out.setdefault(m, uv)
        stack.append(((x, u), (3 * x * m - y, u + uv), (m, uv)))
        stack.append(((m, uv), (3 * m * y - x, uv + v), (y, v)))
    return dict(sorted(out.items()))


def lagrange_routes(z_max: int) -> list[dict]:
    """Both routes to the classical spectrum below 3, side by side."""
    periods = markov_periods(z_max)
    rows = []
    for z, value in zip(markov_numbers(z_max), classical_lagrange_below_3(z_max)):
        word = periods[z]
        via_cf = lagrange_number(word)
        rows.append({"z": z, "period": word, "triple_value": value,
                     "cf_value": via_cf, "agree": via_cf == value})
    return rows


def surd_max(values: Iterable[QuadraticSurd]) -> QuadraticSurd:
    best = None
    for v in values:
        if best is None or v > best:
            best = v
    if best is None:
        raise ValueError("max of no values")
    return best


__all__ = [
    "QuadraticSurd", "SurdSum", "ContinuedFraction", "MarkovTriple",
    "cf_eval", "cf_convergent", "purely_periodic_value", "tail_pair",
    "lagrange_number", "markov_triples", "markov_numbers",
    "classical_lagrange_below_3", "markov_periods", "lagrange_routes",
    "squarefree_split", "surd_max", "decimal_string",
]
