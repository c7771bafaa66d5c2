"""Combinatorics of the minimality argument, as executable checks.

Works on a kneading sequence theta = (a_n) around a candidate minimizing
point p = theta. Returns to the symbol a_0 are measured by d_k, the
smaller of the distances from the past and from the future at k to those
at 0. Records, goodness and happiness, cells, the power-factor Claim,
strange positions and the two periodic competitors follow from there.

Comparisons that cannot be decided from the available enclosures are
reported as None rather than guessed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

import numpy as np

from .engine import exact_markov_value, markov_value
from .errors import (CenterSymbolMismatch, DimensionTooLarge, InadmissibleWord, NotHappy)
from .intervals import Interval, as_fraction
from .potentials import AffineModelPotential, Potential
from .symbolic import (BiSequence, PeriodicSequence, SubshiftOfFiniteType, _one_sided_exact,
                       _symbols, _tail, is_admissible)


# ---------------------------------------------------------------------------
# Sequences with a finite window of known symbols
# ---------------------------------------------------------------------------

class FiniteSequence:
    """Symbols known on indices [lo, hi), with symbols[origin] at index 0."""

    def __init__(self, symbols: Sequence, origin: int = 0):
        self.symbols = tuple(symbols)
        if not 0 <= origin < len(self.symbols):
            raise ValueError("origin outside the symbol range")
        self.origin = origin
        self.lo = -origin
        self.hi = len(self.symbols) - origin

    def at(self, n: int):
        if not self.lo <= n < self.hi:
            raise IndexError(f"index {n} outside the known window [{self.lo}, {self.hi})")
        return self.symbols[n + self.origin]

    def window(self, lo: int, hi: int) -> tuple:
        return tuple(self.at(n) for n in range(lo, hi))

    def shift(self, k: int) -> "FiniteSequence":
        return FiniteSequence(self.symbols, self.origin + k)

    def __len__(self) -> int:
        return len(self.symbols)


def _bounds(theta) -> tuple[float, float]:
    if isinstance(theta, FiniteSequence):
        return theta.lo, theta.hi
    return -math.inf, math.inf


def _as_sequence(theta):
    if isinstance(theta, (BiSequence, FiniteSequence)):
        return theta
    if isinstance(theta, PeriodicSequence):
        return theta.as_bisequence()
    return BiSequence.periodic(_symbols(theta))


def substitution_word(rules: Mapping, seed, length: int) -> tuple:
    """Prefix of the fixed point of a substitution, e.g. Thue-Morse or Fibonacci."""
    word = tuple(seed) if isinstance(seed, (tuple, list)) else (seed,)
    while len(word) < length:
        nxt = tuple(s for a in word for s in rules[a])
        if len(nxt) <= len(word):
            raise ValueError("substitution does not grow")
        word = nxt
    return word[:length]


def thue_morse(length: int, symbols=(1, 2)) -> tuple:
    a, b = symbols
    return substitution_word({a: (a, b), b: (b, a)}, a, length)


def fibonacci_word(length: int, symbols=(1, 2)) -> tuple:
    a, b = symbols
    return substitution_word({a: (a, b), b: (a,)}, a, length)


# ---------------------------------------------------------------------------
# Three-valued logic
# ---------------------------------------------------------------------------

def _not(x):
    return None if x is None else not x


def _and(*xs):
    if any(x is False for x in xs):
        return False
    if any(x is None for x in xs):
        return None
    return True


def _or(*xs):
    if any(x is True for x in xs):
        return True
    if any(x is None for x in xs):
        return None
    return False


# ---------------------------------------------------------------------------
# Parameters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModelParams:
    """Local model at p: f(x, y) ~ a x + b y, contraction rates in (lam1, lam2).

    `K` is the agreement radius of cool indices and `m` the power bound of
    the Claim; K > 5 m^2 is required.
    """

    a: Fraction
    b: Fraction
    lam1: Fraction
    lam2: Fraction
    K: int
    m: int

    def __post_init__(self):
        for name in ("a", "b", "lam1", "lam2"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if self.a == 0 or self.b == 0:
            raise ValueError("a and b must be nonzero")
        if not (0 < self.lam1 < self.lam2 < 1):
            raise ValueError("need 0 < lam1 < lam2 < 1")
        if self.m < 1 or self.K < 1:
            raise ValueError("K and m must be positive")
        if not self.K > 5 * self.m ** 2:
            raise ValueError(f"K={self.K} must exceed 5 m^2 = {5 * self.m ** 2}")

    @staticmethod
    def k0(lam1, lam2) -> int:
        """Least k0 with lam2^k0 < lam1."""
        lam1, lam2 = float(as_fraction(lam1)), float(as_fraction(lam2))
        k = max(1, math.ceil(math.log(lam1) / math.log(lam2)))
        while lam2 ** k >= lam1:
            k += 1
        return k

    @classmethod
    def from_m0(cls, a, b, lam1, lam2, m0: int, K: Optional[int] = None) -> "ModelParams":
        """m = m0 * k0; K defaults to the least integer above 5 m^2."""
        m = m0 * cls.k0(lam1, lam2)
        return cls(a, b, lam1, lam2, K if K is not None else 5 * m * m + 1, m)

    @property
    def cell_constant(self) -> Fraction:
        """min(|a/b|, |b/a|) * lam1^3."""
        r = abs(self.a / self.b)
        return min(r, 1 / r) * self.lam1 ** 3

    def to_json(self) -> dict:
        return {"a": str(self.a), "b": str(self.b), "lam1": str(self.lam1),
                "lam2": str(self.lam2), "K": self.K, "m": self.m}

    @classmethod
    def from_json(cls, doc: Mapping) -> "ModelParams":
        from .potentials import json_number
        if "m0" in doc and "m" not in doc:
            return cls.from_m0(json_number(doc["a"]), json_number(doc["b"]),
                               json_number(doc["lam1"]), json_number(doc["lam2"]),
                               int(doc["m0"]), doc.get("K"))
        return cls(json_number(doc["a"]), json_number(doc["b"]), json_number(doc["lam1"]),
                   json_number(doc["lam2"]), int(doc["K"]), int(doc["m"]))


# ---------------------------------------------------------------------------
# Distances to p
# ---------------------------------------------------------------------------

def _side_distance(theta, k: int, sign: int, depth: Optional[int]) -> Interval:
    """sum_{j >= 1} 2^-(2j+1) [a_{k + sign j} != a_{sign j}]."""
    if isinstance(theta, BiSequence) and depth is None:
        if sign > 0:
            return Interval.point(_one_sided_exact(theta.future(k), theta.future(0)))
        return Interval.point(_one_sided_exact(theta.past(k), theta.past(0)))
    lo, hi = _bounds(theta)
    if sign > 0:
        avail = hi - 1 - max(k, 0)
    else:
        avail = min(k, 0) - lo
    avail = int(avail) if avail != math.inf else None
    D = depth if avail is None else (avail if depth is None else min(depth, avail))
    if D is None:
        raise ValueError("depth is required for sequences without closed form")
    D = max(D, 0)
    total = Fraction(0)
    for j in range(1, D + 1):
        if theta.at(k + sign * j) != theta.at(sign * j):
            total += Fraction(1, 2 ** (2 * j + 1))
    return Interval(total, total + _tail(D))


def one_sided_distances(theta, k: int, depth: Optional[int] = None) -> tuple[Interval, Interval]:
    """(d(pi^s(a_{k-1}, a_{k-2}, ...), p), d(pi^u(a_{k+1}, ...), p))."""
    theta = _as_sequence(theta)
    if theta.at(k) != theta.at(0):
        raise CenterSymbolMismatch(f"a_{k}={theta.at(k)!r} != a_0={theta.at(0)!r}")
    return _side_distance(theta, k, -1, depth), _side_distance(theta, k, 1, depth)


def distance_profile(theta, k: int, depth: Optional[int] = None) -> Interval:
    """Enclosure of d_k, the smaller of the two one-sided distances to p."""
    ds, du = one_sided_distances(theta, k, depth)
    return ds.min(du)


# ---------------------------------------------------------------------------
# Goodness, happiness, records
# ---------------------------------------------------------------------------

def _radius_window(theta, f: Potential):
    lo, hi = _bounds(theta)
    if f.refinable:
        r = max(f.left, f.right)
        if lo != -math.inf:
            r = int(min(r, -lo, hi - 1))
        return r, r
    return f.left, f.right


def _value(f: Potential, window) -> Interval:
    return f.value(window)


@dataclass(frozen=True)
class HappinessFlags:
    left_good: Optional[bool]
    right_good: Optional[bool]
    left_happy: Optional[bool]
    right_happy: Optional[bool]
    cool: Optional[bool]
    agrees: bool


def _lt(x: Interval, y: Interval) -> Optional[bool]:
    return x.certainly_lt(y)


def happiness(theta, k: int, f: Potential, params: ModelParams,
              depth: Optional[int] = None) -> HappinessFlags:
    """Goodness, happiness and coolness of a return k (a_k = a_0).

    f at pi^s(a_{k-1}, ...) uses the past at k and the future at 0, and
    symmetrically for pi^u. `agrees` records a_{k+j} = a_j for |j| <= K,
    the part of coolness that does not involve f.
    """
    theta = _as_sequence(theta)
    ds, du = one_sided_distances(theta, k, depth)
    L, R = _radius_window(theta, f)
    fp = _value(f, theta.window(-L, R + 1))
    ws = tuple(theta.at(k + n) if n < 0 else theta.at(n) for n in range(-L, R + 1))
    wu = tuple(theta.at(n) if n <= 0 else theta.at(k + n) for n in range(-L, R + 1))
    left_good = _lt(_value(f, ws), fp)
    right_good = _lt(_value(f, wu), fp)
    ge = du.certainly_le(ds)  # d^s >= d^u
    left_happy = _and(left_good, _or(_not(right_good), ge))
    right_happy = _and(right_good, _or(_not(left_good), _not(ge)))
    lo, hi = _bounds(theta)
    K = params.K
    if k - K < lo or k + K >= hi:
        raise IndexError(f"agreement radius K={K} around {k} exceeds the known window")
    agrees = all(theta.at(k + j) == theta.at(j) for j in range(-K, K + 1))
    cool = _and(_or(left_happy, right_happy), agrees)
    return HappinessFlags(left_good, right_good, left_happy, right_happy, cool, agrees)


@dataclass(frozen=True)
class RecordPosition:
    k: int
    d: Interval
    d_s: Interval
    d_u: Interval
    weak_record: Optional[bool]
    record: bool
    flags: Optional[HappinessFlags] = None


@dataclass(frozen=True)
class RecordAnalysis:
    positions: tuple
    records: tuple
    indeterminate_at: Optional[int]
    periodic: bool
    horizon: int

    def position(self, k: int) -> RecordPosition:
        for p in self.positions:
            if p.k == k:
                return p
        raise KeyError(k)

    @property
    def record_distances(self) -> list[Interval]:
        return [self.position(k).d for k in self.records]


def records(theta, params: ModelParams, horizon: int, f: Optional[Potential] = None,
            depth: Optional[int] = None) -> RecordAnalysis:
    """Flag table for every return k in 1..horizon and the record chain.

    k_1 is the first return; k_{n+1} is the first weak record after k_n
    with d_k < min(|a/b|, |b/a|) lam1^3 d_{k_n}. The chain stops at the
    first candidate whose status cannot be decided.
    """
    theta = _as_sequence(theta)
    lo, hi = _bounds(theta)
    if horizon >= hi:
        raise IndexError(f"horizon {horizon} exceeds the known window")
    a0 = theta.at(0)
    C = params.cell_constant
    rows = []
    min_lo = min_hi = None
    for k in range(1, horizon + 1):
        if theta.at(k) != a0:
            continue
        ds, du = one_sided_distances(theta, k, depth)
        d = ds.min(du)
        if min_lo is None:
            weak = True
        elif d.hi < min_lo:
            weak = True
        elif d.lo >= min_hi:
            weak = False
        else:
            weak = None
        min_lo = d.lo if min_lo is None else min(min_lo, d.lo)
        min_hi = d.hi if min_hi is None else min(min_hi, d.hi)
        rows.append([k, d, ds, du, weak])
    chain = []
    stuck = None
    if rows:
        chain.append(rows[0][0])
        last = rows[0][1]
        for k, d, _, _, weak in rows[1:]:
            cond = _and(weak, d.certainly_lt(last * C))
            if cond is None:
                stuck = k
                break
            if cond:
                chain.append(k)
                last = d
    chain_set = set(chain)
    positions = []
    for k, d, ds, du, weak in rows:
        flags = None
        if f is not None:
            try:
                flags = happiness(theta, k, f, params, depth)
            except IndexError:
                flags = None
        positions.append(RecordPosition(k, d, ds, du, weak, k in chain_set, flags))
    periodic = isinstance(theta, BiSequence) and theta.periodic_word() is not None
    return RecordAnalysis(tuple(positions), tuple(chain), stuck, periodic, horizon)


# ---------------------------------------------------------------------------
# Cells
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CellSpec:
    k: int
    side: str
    r: int
    s: int
    r_ext: int
    s_ext: int

    def basic(self, theta) -> tuple:
        return _as_sequence(theta).window(self.k - self.r, self.k + self.s + 1)

    def extended(self, theta) -> tuple:
        return _as_sequence(theta).window(self.k - self.r_ext, self.k + self.s_ext + 1)


def extended_length(n: int, K: int) -> int:
    """floor((1 + 2/K) n)."""
    return math.floor((1 + Fraction(2, K)) * n)


def _ratio_product(ratios: Mapping, word) -> Fraction:
    out = Fraction(1)
    for a in word:
        out *= ratios[a]
    return out


def _first_mismatch(theta, k: int, sign: int, limit: int) -> int:
    for j in range(1, limit + 1):
        if theta.at(k + sign * j) != theta.at(sign * j):
            return j
    raise ValueError(f"no mismatch within {limit} symbols on that side of {k}")


def cells(theta, k: int, f: Potential, params: ModelParams, ratios_s: Optional[Mapping] = None,
          ratios_u: Optional[Mapping] = None, side: Optional[str] = None,
          limit: int = 10_000) -> CellSpec:
    """Basic and extended cell of a happy return k.

    Left-happy: r_k is the first mismatch to the left; s_k is the least s
    with C |I^u(a_{k+1..k+s})| <= |I^s(a_{k-1..k-r_k})|. Right-happy is
    symmetric. Interval lengths are products of per-symbol ratios
    (default: (lam1 + lam2)/2 for every symbol).
    """
    theta = _as_sequence(theta)
    if side is None:
        flags = happiness(theta, k, f, params)
        if flags.left_happy:
            side = "left"
        elif flags.right_happy:
            side = "right"
        else:
            raise NotHappy(f"position {k} is not certifiably left- or right-happy")
    elif side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    default = (params.lam1 + params.lam2) / 2
    rs = ratios_s if ratios_s is not None else _DefaultRatios(default)
    ru = ratios_u if ratios_u is not None else _DefaultRatios(default)
    C = params.cell_constant
    lo, hi = _bounds(theta)
    if side == "left":
        r = _first_mismatch(theta, k, -1, int(min(limit, k - lo)))
        target = _ratio_product(rs, [theta.at(k - j) for j in range(1, r + 1)])
        s, prod = 0, Fraction(1)
        while True:
            s += 1
            prod *= ru[theta.at(k + s)]
            if C * prod <= target:
                break
    else:
        s = _first_mismatch(theta, k, 1, int(min(limit, hi - 1 - k)))
        target = _ratio_product(ru, [theta.at(k + j) for j in range(1, s + 1)])
        r, prod = 0, Fraction(1)
        while True:
            r += 1
            prod *= rs[theta.at(k - r)]
            if C * prod <= target:
                break
    return CellSpec(k, side, r, s, extended_length(r, params.K), extended_length(s, params.K))


class _DefaultRatios(dict):
    def __init__(self, value):
        super().__init__()
        self.value = value

    def __missing__(self, key):
        return self.value


# ---------------------------------------------------------------------------
# The power-factor Claim
# ---------------------------------------------------------------------------

def smallest_period(word: Sequence) -> int:
    """Least p with word[i] == word[i + p] for all valid i (prefix function)."""
    w = tuple(word)
    n = len(w)
    if n == 0:
        return 0
    pi = [0] * n
    for i in range(1, n):
        j = pi[i - 1]
        while j and w[i] != w[j]:
            j = pi[j - 1]
        if w[i] == w[j]:
            j += 1
        pi[i] = j
    return n - pi[-1]


@dataclass(frozen=True)
class PowerFactor:
    t: int
    gamma: tuple
    m: int


def power_factor_check(theta, m: int, center_window: int) -> Optional[PowerFactor]:
    """First t <= center_window with (a_{-mt}, ..., a_{mt-1}) = gamma^(2m).

    t is a period of that window exactly when its least period divides t
    (the window has length 2mt >= 2t), so the first t found gives a
    primitive gamma. Returns None (clean) if no t qualifies among those
    whose window is known.
    """
    theta = _as_sequence(theta)
    if m < 1:
        raise ValueError("m must be positive")
    lo, hi = _bounds(theta)
    for t in range(1, center_window + 1):
        if -m * t < lo or m * t > hi:
            break
        w = theta.window(-m * t, m * t)
        if t % smallest_period(w) == 0:
            return PowerFactor(t, w[:t], m)
    return None


# ---------------------------------------------------------------------------
# Strange positions
# ---------------------------------------------------------------------------

def strange_positions(theta, alpha: Sequence, lo: Optional[int] = None,
                      hi: Optional[int] = None) -> list[int]:
    """Positions k in [lo, hi) where (c_{k+1-s}, ..., c_{k+1}) is not a factor of alpha-bar.

    Defaults scan the known window, or for an eventually periodic sequence
    its core plus a period of each tail and a margin of |alpha|.
    """
    theta = _as_sequence(theta)
    alpha = _symbols(alpha)
    s = len(alpha)
    if s == 0:
        raise ValueError("alpha must be nonempty")
    factors = {tuple(alpha[(j + i) % s] for i in range(s + 1)) for j in range(s)}
    if isinstance(theta, FiniteSequence):
        dlo, dhi = theta.lo + s - 1, theta.hi - 1
    else:
        dlo = theta.start - len(theta.left) - s
        dhi = theta.end + len(theta.right) + s
    lo = dlo if lo is None else lo
    hi = dhi if hi is None else hi
    return [k for k in range(lo, hi) if theta.window(k + 1 - s, k + 2) not in factors]


# ---------------------------------------------------------------------------
# Surgery and competitors
# ---------------------------------------------------------------------------

def _compare(a: Interval, b: Interval, ea, eb) -> Optional[bool]:
    """Is a < b? Decided exactly when both exact values are known."""
    if ea is not None and eb is not None:
        return ea < eb
    return a.certainly_lt(b)


@dataclass(frozen=True)
class SurgeryReport:
    original: tuple
    surgered: tuple
    original_value: Interval
    surgered_value: Interval
    original_exact: object
    surgered_exact: object
    reduced: Optional[bool]


def deletion_surgery(word: Sequence, gamma: Sequence, f: Potential, position: Optional[int] = None,
                     S: Optional[SubshiftOfFiniteType] = None) -> SurgeryReport:
    """Compare the periodic closures of `word` and of `word` with one gamma removed."""
    w, g = _symbols(word), _symbols(gamma)
    if not g:
        raise ValueError("gamma must be nonempty")
    if position is None:
        position = next((i for i in range(len(w) - len(g) + 1) if w[i:i + len(g)] == g), None)
        if position is None:
            raise ValueError("gamma does not occur in the word")
    elif w[position:position + len(g)] != g:
        raise ValueError(f"gamma does not occur at position {position}")
    cut = w[:position] + w[position + len(g):]
    if not cut:
        raise ValueError("deleting gamma leaves an empty word")
    if S is not None:
        for v, name in ((w, "original"), (cut, "surgered")):
            if not is_admissible(v + v[:1], S):
                raise InadmissibleWord(f"{name} closure {v} is not admissible")
    x, y = BiSequence.periodic(w), BiSequence.periodic(cut)
    vx, vy = markov_value(x, f), markov_value(y, f)
    ex, ey = exact_markov_value(x, f), exact_markov_value(y, f)
    return SurgeryReport(w, cut, vx, vy, ex, ey, _compare(vy, vx, ey, ex))


@dataclass(frozen=True)
class CompetitorReport:
    mode: str
    n: int
    period: tuple
    competitor: PeriodicSequence
    competitor_value: Interval
    theta_value: Interval
    competitor_exact: object
    theta_exact: object
    smaller: Optional[bool]


def _theta_value(theta, f: Potential):
    if isinstance(theta, BiSequence):
        return markov_value(theta, f), exact_markov_value(theta, f)
    # only a lower bound is known: the max over fully known windows
    lo, hi = theta.lo + f.left, theta.hi - f.right
    vals = [f.value(theta.window(n - f.left, n + f.right + 1)) for n in range(lo, hi)]
    best = max(v.lo for v in vals)
    return Interval(best, max(best, max(v.hi for v in vals))), None


def periodic_competitor(theta, mode: str, n: int, f: Potential, params: ModelParams,
                        horizon: int, S: Optional[SubshiftOfFiniteType] = None) -> CompetitorReport:
    """The periodic point built from the records and its Markov value versus theta's.

    Case "i" repeats (a_0, ..., a_{k_n - 1}); case "ii" repeats
    (a_{k_n}, ..., a_{k_{n+1} - 1}). n is 1-based. For a sequence known
    only on a finite window, theta's value is a lower bound and `smaller`
    is only certified True.
    """
    theta = _as_sequence(theta)
    mode = {"case-i": "i", "case-ii": "ii"}.get(mode, mode)
    if mode not in ("i", "ii"):
        raise ValueError("mode must be 'i' or 'ii'")
    analysis = records(theta, params, horizon)
    need = n if mode == "i" else n + 1
    if n < 1 or len(analysis.records) < need:
        raise ValueError(f"only {len(analysis.records)} records within horizon {horizon}")
    kn = analysis.records[n - 1]
    period = theta.window(0, kn) if mode == "i" else theta.window(kn, analysis.records[n])
    if S is not None and not is_admissible(period + period[:1], S):
        raise InadmissibleWord(f"competitor period {period} is not admissible")
    comp = BiSequence.periodic(period)
    cv, ce = markov_value(comp, f), exact_markov_value(comp, f)
    tv, te = _theta_value(theta, f)
    if isinstance(theta, BiSequence):
        smaller = _compare(cv, tv, ce, te)
    else:
        smaller = True if cv.hi < tv.lo else None
    return CompetitorReport(mode, n, period, PeriodicSequence.from_word(period), cv, tv, ce, te, smaller)


# ---------------------------------------------------------------------------
# Measure estimate for the unstable rescaling
# ---------------------------------------------------------------------------

def dimension_proxy(S: SubshiftOfFiniteType, ratios_s: Mapping, ratios_u: Mapping) -> float:
    """d_s + d_u, each the zero of s -> log rho(B diag(ratio^s))."""
    B = S.pruned().matrix.astype(float)
    alphabet = S.pruned().alphabet
    if B.size == 0:
        return 0.0

    def one_side(ratios):
        logs = np.log(np.array([float(ratios[a]) for a in alphabet]))

        def rho(s):
            return max(abs(np.linalg.eigvals(B * np.exp(s * logs)[None, :])))

        if rho(0.0) <= 1.0 + 1e-12:
            return 0.0
        lo, hi = 0.0, 1.0
        while rho(hi) > 1.0:
            hi *= 2
        for _ in range(80):
            mid = (lo + hi) / 2
            if rho(mid) > 1.0:
                lo = mid
            else:
                hi = mid
        return (lo + hi) / 2

    return one_side(ratios_s) + one_side(ratios_u)


def _stopping_words(S: SubshiftOfFiniteType, center, ratios: Mapping, rho: float, direction: str):
    """Shortest admissible one-sided words (outward from center) with ratio product <= rho."""
    out = []
    stack = [((), 1.0)]
    while stack:
        word, length = stack.pop()
        if length <= rho and word:
            out.append((word, length))
            continue
        last = word[-1] if word else center
        nxt = S.successors(last) if direction == "u" else [a for a in S.alphabet if S.allowed(a, last)]
        for a in nxt:
            stack.append((word + (a,), length * float(ratios[a])))
    return out


def _decomposition(S, model: AffineModelPotential, center, rho_fine: float, rho_coarse: float):
    """Fine rectangles of R_center with (x0, lx, y0, ly, parent id)."""
    rows = []
    parents: dict = {}
    emb_s, emb_u = model.stable, model.unstable
    for ws, ls in _stopping_words(S, center, emb_s.ratios, rho_fine, "s"):
        ps = _prefix_at(ws, emb_s.ratios, rho_coarse)
        for wu, lu in _stopping_words(S, center, emb_u.ratios, rho_fine, "u"):
            pu = _prefix_at(wu, emb_u.ratios, rho_coarse)
            pid = parents.setdefault((ps, pu), len(parents))
            rows.append((float(emb_s.embed(ws)), ls, float(emb_u.embed(wu)), lu, pid))
    if not rows:
        return np.zeros((0, 5))
    return np.array(rows, dtype=float)


def _prefix_at(word, ratios, rho):
    length = 1.0
    for i, a in enumerate(word):
        length *= float(ratios[a])
        if length <= rho:
            return word[:i + 1]
    return word


def _bad_intervals(cells: np.ndarray, a: float, b: float, rho: float, lam_lo: float, lam_hi: float,
                   chunk: int = 2048):
    """lambda-intervals on which two fine cells from different coarse cells
    have f_lambda-images closer than rho."""
    n = len(cells)
    xc = cells[:, 0] + cells[:, 1] / 2
    yc = cells[:, 2] + cells[:, 3] / 2
    lx, ly, pid = cells[:, 1], cells[:, 3], cells[:, 4]
    out_lo, out_hi = [], []
    for i0 in range(0, n, chunk):
        i = np.arange(i0, min(n, i0 + chunk))[:, None]
        j = np.arange(n)[None, :]
        sel = (j > i) & (pid[i] != pid[j])
        if not sel.any():
            continue
        ii, jj = np.broadcast_to(i, sel.shape)[sel], np.broadcast_to(j, sel.shape)[sel]
        A = a * (xc[ii] - xc[jj])
        B = b * (yc[ii] - yc[jj])
        C = abs(a) * (lx[ii] + lx[jj]) / 2 + rho
        D = abs(b) * (ly[ii] + ly[jj]) / 2
        lo = np.full(A.shape, lam_lo)
        hi = np.full(A.shape, lam_hi)
        # (B - D) lam < C - A
        c1 = B - D
        with np.errstate(divide="ignore", invalid="ignore"):
            bound1 = (C - A) / c1
            bound2 = (-C - A) / (B + D)
        hi = np.where(c1 > 0, np.minimum(hi, bound1), hi)
        lo = np.where(c1 < 0, np.maximum(lo, bound1), lo)
        empty = (c1 == 0) & (C - A <= 0)
        # (B + D) lam > -C - A
        c2 = B + D
        lo = np.where(c2 > 0, np.maximum(lo, bound2), lo)
        hi = np.where(c2 < 0, np.minimum(hi, bound2), hi)
        empty |= (c2 == 0) & (-C - A >= 0)
        keep = (~empty) & (lo < hi)
        out_lo.append(lo[keep])
        out_hi.append(hi[keep])
    if not out_lo:
        return np.zeros(0), np.zeros(0)
    return np.concatenate(out_lo), np.concatenate(out_hi)


@dataclass(frozen=True)
class LambdaScanReport:
    k: int
    dimension: float
    r_values: tuple
    bad_fraction: tuple
    tail_bad_fraction: tuple
    fitted_rate: Optional[float]
    predicted_rate: float
    grid: np.ndarray = field(repr=False)
    bad: np.ndarray = field(repr=False)

    def good_lambdas(self, r: int) -> np.ndarray:
        return self.grid[~self.bad[self.r_values.index(r)]]

    def rate_ratio(self) -> Optional[float]:
        if self.fitted_rate is None or self.predicted_rate == 0:
            return None
        return self.fitted_rate / self.predicted_rate


def lambda_grid(delta: float = 0.1, points: int = 10_000) -> np.ndarray:
    return np.linspace(1 - delta, 1 + delta, points)


def lambda_scan(model: AffineModelPotential, S: SubshiftOfFiniteType, r_range: Sequence[int], k: int,
                grid: Optional[np.ndarray] = None) -> LambdaScanReport:
    """Fraction of lambda on the grid that is bad at each resolution r.

    lambda is bad at r if, in some rectangle R_a, two rectangles of the
    2^-kr-decomposition lying in different rectangles of the
    2^-(k-1)r-decomposition have f_lambda-images within 2^-kr, where
    f_lambda(x, y) = a x + b lambda y + c. The per-r fractions are fitted
    by log(fraction) ~ -rate * r; the proof's estimate is
    (1 - 2 d k) log 2. `tail_bad_fraction[i]` is the fraction bad at some
    r >= r_values[i] within the scanned range.
    """
    if k < 2:
        raise ValueError("k must be an integer > 1")
    grid = lambda_grid() if grid is None else np.asarray(grid, dtype=float)
    d = dimension_proxy(S, model.stable.ratios, model.unstable.ratios)
    if d >= 1 / (2 * k):
        raise DimensionTooLarge(f"dimension proxy {d:.4f} >= 1/(2k) = {1 / (2 * k):.4f}")
    a, b = float(model.a), float(model.b)
    rs = tuple(int(r) for r in r_range)
    masks = []
    for r in rs:
        fine, coarse = 2.0 ** (-k * r), 2.0 ** (-(k - 1) * r)
        diff = np.zeros(len(grid) + 1, dtype=np.int64)
        for center in S.pruned().alphabet:
            cells_ = _decomposition(S, model, center, fine, coarse)
            if len(cells_) < 2:
                continue
            lo, hi = _bad_intervals(cells_, a, b, fine, grid[0], grid[-1])
            i0 = np.searchsorted(grid, lo, side="right")
            i1 = np.searchsorted(grid, hi, side="left")
            ok = i1 > i0
            np.add.at(diff, i0[ok], 1)
            np.add.at(diff, i1[ok], -1)
        masks.append(np.cumsum(diff[:-1]) > 0)
    bad = np.array(masks) if masks else np.zeros((0, len(grid)), dtype=bool)
    frac = tuple(float(m.mean()) for m in bad)
    tail = []
    acc = np.zeros(len(grid), dtype=bool)
    for m in bad[::-1]:
        acc = acc | m
        tail.append(float(acc.mean()))
    tail = tuple(tail[::-1])
    pts = [(r, math.log(x)) for r, x in zip(rs, frac) if x > 0]
    rate = None
    if len(pts) >= 2:
        xs, ys = np.array(pts).T
        rate = float(-np.polyfit(xs, ys, 1)[0])
    return LambdaScanReport(k, d, rs, frac, tail, rate, (1 - 2 * d * k) * math.log(2), grid, bad)
