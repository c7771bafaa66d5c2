"""Finite-window potentials on subshifts.

A potential assigns to position n of a sequence a value depending on the
symbols n - left .. n + right. Values are returned as `Interval`s: table
potentials are exact (degenerate intervals), the Gauss potential
alpha_0 + beta_0 is enclosed using the two extreme continued-fraction
tails.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Mapping, Optional, Sequence, Union

import numpy as np

from .classical import ContinuedFraction, SurdSum, cf_eval
from .errors import ZeroGap
from .intervals import Interval, as_fraction
from .symbolic import BiSequence, SubshiftOfFiniteType, sequence_distance


class Potential:
    """Interface shared by every potential.

    Subclasses provide `left`, `right` and `value(window)`; `at` evaluates
    at position n of a sequence.
    """

    left: int = 0
    right: int = 0
    # whether value() accepts shorter, centered windows (coarser enclosures)
    refinable: bool = False

    @property
    def window_length(self) -> int:
        return self.left + self.right + 1

    def value(self, window: Sequence) -> Interval:
        raise NotImplementedError

    def at(self, x, n: int = 0) -> Interval:
        return self.value(x.window(n - self.left, n + self.right + 1))


class WindowPotential(Potential):
    """Locally constant potential given by a table of window values."""

    def __init__(self, left: int, right: int, table: Mapping[tuple, object]):
        if left < 0 or right < 0:
            raise ValueError("radii must be nonnegative")
        self.left, self.right = int(left), int(right)
        w = self.left + self.right + 1
        self.table = {}
        for k, v in table.items():
            k = tuple(k) if isinstance(k, (tuple, list)) else (k,)
            if len(k) != w:
                raise ValueError(f"window {k} has length {len(k)} != {w}")
            self.table[k] = as_fraction(v)

    @classmethod
    def from_function(cls, S: SubshiftOfFiniteType, left: int, right: int,
                      fn: Callable[[tuple], object]) -> "WindowPotential":
        return cls(left, right, {w: fn(w) for w in S.words(left + right + 1)})

    @classmethod
    def constant(cls, S: SubshiftOfFiniteType, c, left: int = 0, right: int = 0) -> "WindowPotential":
        return cls.from_function(S, left, right, lambda w: c)

    def value(self, window) -> Interval:
        window = tuple(window)
        try:
            return Interval.point(self.table[window])
        except KeyError:
            raise KeyError(f"potential undefined on window {window}") from None

    def is_total_on(self, S: SubshiftOfFiniteType) -> bool:
        return all(w in self.table for w in S.words(self.window_length))

    def to_json(self) -> dict:
        return {"window": {"left": self.left, "right": self.right,
                           "table": {",".join(str(s) for s in k): str(v)
                                     for k, v in sorted(self.table.items())}}}

    def __repr__(self) -> str:
        return f"WindowPotential(left={self.left}, right={self.right}, |table|={len(self.table)})"


# ---------------------------------------------------------------------------
# Gauss potential
# ---------------------------------------------------------------------------

def cf_tail_interval(quotients: Sequence[int]) -> Interval:
    """Enclosure of [0; c_1, ..., c_k, *] over every tail * >= 1.

    The value is monotone in the tail, so the endpoints are the finite
    expansions ending with c_k (tail -> infinity) and c_k + 1 (tail = 1).
    """
    if not quotients:
        return Interval(0, 1)
    p, pp, q, qp = 0, 1, 1, 0  # convergent matrix for the leading 0
    for a in quotients:
        p, pp = a * p + pp, p
        q, qp = a * q + qp, q
    x = Fraction(p, q)
    y = Fraction(p + pp, q + qp)
    return Interval(min(x, y), max(x, y))


def continuants(quotients: Sequence[int]) -> list[int]:
    """Denominators q_0 = 1, q_1, ..., q_k of [0; c_1, ..., c_k]."""
    qs, qm = [1], 0
    for a in quotients:
        qs_new = a * qs[-1] + qm
        qm = qs[-1]
        qs.append(qs_new)
    return qs


class GaussPotential(Potential):
    """f(a) = [a_0; a_1, a_2, ...] + [0; a_-1, a_-2, ...] at window resolution.

    `value` accepts any centered window of odd length up to 2*depth + 1
    and encloses alpha_0 + beta_0 over every extension of that window by
    positive integers.
    """

    refinable = True

    def __init__(self, depth: int):
        if depth < 0:
            raise ValueError("depth must be >= 0")
        self.depth = int(depth)
        self.left = self.right = self.depth

    def value(self, window) -> Interval:
        window = tuple(window)
        if len(window) % 2 == 0 or len(window) > 2 * self.depth + 1:
            raise ValueError(f"window length {len(window)} is not odd and <= {2 * self.depth + 1}")
        j = len(window) // 2
        center = window[j]
        if any(int(a) < 1 for a in window):
            raise ValueError("Gauss potential needs positive integer symbols")
        fwd = cf_tail_interval(window[j + 1:])
        bwd = cf_tail_interval(window[:j][::-1])
        return fwd + bwd + int(center)

    def exact(self, x: BiSequence, n: int = 0) -> SurdSum:
        """alpha_n + beta_n at an eventually periodic point, exactly."""
        fut = x.future(n)
        past = x.past(n)
        alpha = cf_eval(ContinuedFraction((int(x.at(n)),) + fut.pre, fut.period))
        beta = cf_eval(ContinuedFraction(past.pre, past.period)).reciprocal()
        return SurdSum.of(alpha) + SurdSum.of(beta)

    def at(self, x, n: int = 0, bits: int = 160) -> Interval:
        if isinstance(x, BiSequence):
            return self.exact(x, n).enclose(bits)
        return super().at(x, n)

    def to_json(self) -> dict:
        return {"gauss": {"depth": self.depth}}

    def __repr__(self) -> str:
        return f"GaussPotential(depth={self.depth})"


GaussPotentialSpec = GaussPotential


def gauss_window(spec: GaussPotential, window) -> Interval:
    return spec.value(window)


def gauss_width_bound(window) -> Fraction:
    """Sum over both tails of 1/(q_k q_{k-1}) for a centered window."""
    window = tuple(window)
    j = len(window) // 2
    total = Fraction(0)
    for tail in (window[j + 1:], window[:j][::-1]):
        if not tail:
            total += 1
            continue
        qs = continuants(tail)
        total += Fraction(1, qs[-1] * qs[-2])
    return total


# ---------------------------------------------------------------------------
# Perturbations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PerturbationSpec:
    """Per-cylinder constants t_a and an optional unstable-direction scale.

    Keys of `t` are center symbols by default. With `key_left` or
    `key_right` set, keys are the words at offsets -key_left..key_right
    around the center, so each deeper cylinder gets its own constant.
    """

    t: Mapping = field(default_factory=dict)
    lam: Fraction = Fraction(1)
    key_left: int = 0
    key_right: Optional[int] = None
    epsilon: Optional[Fraction] = None
    delta: Optional[Fraction] = None

    def __post_init__(self):
        t = {k: as_fraction(v) for k, v in dict(self.t).items()}
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "lam", as_fraction(self.lam))
        if self.key_right is None:
            object.__setattr__(self, "key_right", self.key_left)
        if self.key_left < 0 or self.key_right < 0:
            raise ValueError("key radii must be nonnegative")
        if self.epsilon is not None:
            eps = as_fraction(self.epsilon)
            bad = [k for k, v in t.items() if abs(v) > eps]
            if bad:
                raise ValueError(f"|t_a| exceeds epsilon={eps} for keys {bad}")
        if self.delta is not None and abs(self.lam - 1) > as_fraction(self.delta):
            raise ValueError(f"lambda={self.lam} outside [1-delta, 1+delta]")

    @property
    def symbol_keyed(self) -> bool:
        return self.key_left == 0 and self.key_right == 0

    def key(self, window: Sequence, center: int):
        if self.symbol_keyed:
            return window[center]
        return tuple(window[center - self.key_left:center + self.key_right + 1])

    def key_at(self, x, n: int = 0):
        if self.symbol_keyed:
            return x.at(n)
        return x.window(n - self.key_left, n + self.key_right + 1)

    def __add__(self, other: "PerturbationSpec") -> "PerturbationSpec":
        if (self.key_left, self.key_right) != (other.key_left, other.key_right):
            raise ValueError("cannot add perturbations with different keys")
        t = dict(self.t)
        for k, v in other.t.items():
            t[k] = t.get(k, 0) + v
        return PerturbationSpec(t, self.lam * other.lam, self.key_left, self.key_right)

    def to_json(self) -> dict:
        if self.symbol_keyed:
            t = {str(k): str(v) for k, v in self.t.items()}
        else:
            t = {",".join(map(str, k)): str(v) for k, v in self.t.items()}
        return {"t": t, "lambda": str(self.lam),
                "key_left": self.key_left, "key_right": self.key_right}


def random_perturbation(S: SubshiftOfFiniteType, epsilon, rng: np.random.Generator,
                        key_left: int = 0, key_right: Optional[int] = None,
                        bits: int = 30) -> PerturbationSpec:
    """Independent uniform constants in [-epsilon, epsilon] on a dyadic grid."""
    eps = as_fraction(epsilon)
    key_right = key_left if key_right is None else key_right
    if key_left == 0 and key_right == 0:
        keys = list(S.alphabet)
    else:
        keys = list(S.words(key_left + key_right + 1))
    scale = 1 << bits
    t = {k: eps * Fraction(int(rng.integers(-scale, scale + 1)), scale) for k in keys}
    return PerturbationSpec(t, key_left=key_left, key_right=key_right, epsilon=eps)


def cylinder_perturbation(S: SubshiftOfFiniteType, n: int, epsilon,
                          rng: np.random.Generator) -> PerturbationSpec:
    """Random constants keyed on the centered n-cylinders used by injectivity_check."""
    c = (n - 1) // 2
    return random_perturbation(S, epsilon, rng, key_left=c, key_right=n - 1 - c)


class PerturbedPotential(Potential):
    """base + t[key(window)], for bases that are not plain tables."""

    def __init__(self, base: Potential, spec: PerturbationSpec):
        self.base = base
        self.spec = spec
        self.left = max(base.left, spec.key_left)
        self.right = max(base.right, spec.key_right)
        self.refinable = base.refinable
        vals = list(spec.t.values()) or [Fraction(0)]
        self._spread = Interval(min(min(vals), 0), max(max(vals), 0))

    def _offset(self, window, center) -> Union[Fraction, Interval]:
        if center < self.spec.key_left or len(window) - center - 1 < self.spec.key_right:
            return self._spread
        return self.spec.t.get(self.spec.key(window, center), Fraction(0))

    def value(self, window) -> Interval:
        window = tuple(window)
        if self.refinable:
            j = len(window) // 2
            bj = min(j, self.base.left)
            inner = window[j - bj:j + bj + 1]
            return self.base.value(inner) + self._offset(window, j)
        lo = self.left - self.base.left
        inner = window[lo:lo + self.base.window_length]
        return self.base.value(inner) + self._offset(window, self.left)

    def at(self, x, n: int = 0) -> Interval:
        return self.base.at(x, n) + self.spec.t.get(self.spec.key_at(x, n), Fraction(0))

    def __repr__(self) -> str:
        return f"PerturbedPotential({self.base!r}, keys=-{self.spec.key_left}..{self.spec.key_right})"


def perturb(f: Potential, p: PerturbationSpec) -> Potential:
    """Add t[a_0] (or t[window], for deeper keys) to every window value."""
    if isinstance(f, WindowPotential):
        if p.key_left > f.left or p.key_right > f.right:
            raise ValueError("perturbation key reaches outside the table's window")
        table = {w: v + p.t.get(p.key(w, f.left), Fraction(0)) for w, v in f.table.items()}
        return WindowPotential(f.left, f.right, table)
    if isinstance(f, PerturbedPotential) and \
            (f.spec.key_left, f.spec.key_right) == (p.key_left, p.key_right):
        return PerturbedPotential(f.base, f.spec + p)
    return PerturbedPotential(f, p)


# ---------------------------------------------------------------------------
# Injectivity diagnostics
# ---------------------------------------------------------------------------

def _closing_path(S: SubshiftOfFiniteType, a, b) -> Optional[tuple]:
    """Shortest word c (possibly empty) with a c b admissible."""
    if S.allowed(a, b):
        return ()
    prev = {a: None}
    queue = deque([a])
    while queue:
        u = queue.popleft()
        for v in S.successors(u):
            if v in prev:
                continue
            prev[v] = u
            if S.allowed(v, b):
                path = [v]
                while prev[path[-1]] != a:
                    path.append(prev[path[-1]])
                return tuple(reversed(path))
            queue.append(v)
    return None


def _cylinder_center(f: Potential, n: int) -> int:
    if f.refinable or n < f.window_length:
        return (n - 1) // 2
    return f.left + (n - f.window_length) // 2


def cylinder_representatives(S: SubshiftOfFiniteType, n: int, center: int) -> list[tuple[tuple, BiSequence]]:
    """(word, periodic representative) for each admissible n-word.

    The representative is the periodic extension of the word (closed up
    by a shortest connecting path when the wrap is not allowed), placed
    so that word[center] sits at index 0.
    """
    reps = []
    for w in S.words(n):
        closing = _closing_path(S, w[-1], w[0])
        if closing is None:
            continue
        reps.append((w, BiSequence.periodic(w + closing, phase=center)))
    return reps


@dataclass(frozen=True)
class InjectivityResult:
    passed: bool
    n: int
    cylinders: int
    min_gap: Optional[Fraction]
    pair: Optional[tuple] = None

    def __bool__(self) -> bool:
        return self.passed


def _cylinder_values(f: Potential, S: SubshiftOfFiniteType, n: int):
    center = _cylinder_center(f, n)
    reps = cylinder_representatives(S, n, center)
    return [(w, x, f.at(x, 0)) for w, x in reps]


def injectivity_check(f: Potential, S: SubshiftOfFiniteType, n: int) -> InjectivityResult:
    """Check that the f-enclosures of all n-cylinder representatives are disjoint."""
    if not f.refinable and n < f.window_length:
        raise ValueError(f"depth n={n} is below the window length {f.window_length}")
    vals = sorted(_cylinder_values(f, S, n), key=lambda t: (t[2].lo, t[2].hi))
    min_gap = None
    for (w1, _, v1), (w2, _, v2) in zip(vals, vals[1:]):
        if v1.overlaps(v2):
            return InjectivityResult(False, n, len(vals), Fraction(0), (w1, w2))
        gap = v2.lo - v1.hi
        if min_gap is None or gap < min_gap:
            min_gap = gap
    # sorting by lo does not expose a long interval overlapping a later one
    running_hi = None
    for w, _, v in vals:
        if running_hi is not None and v.lo <= running_hi[0]:
            return InjectivityResult(False, n, len(vals), Fraction(0), (running_hi[1], w))
        if running_hi is None or v.hi > running_hi[0]:
            running_hi = (v.hi, w)
    return InjectivityResult(True, n, len(vals), min_gap)


@dataclass(frozen=True)
class HolderConstant:
    c: float
    n: int
    k: int
    pair: Optional[tuple]
    flagged: bool

    def __float__(self) -> float:
        return self.c


def _pair_constant(vals, exponent: float):
    best, pair = math.inf, None
    for (w1, x1, v1), (w2, x2, v2) in combinations(vals, 2):
        gap = max(v1.lo - v2.hi, v2.lo - v1.hi)
        if gap <= 0:
            raise ZeroGap(f"cylinders {w1} and {w2} are not separated")
        d = sequence_distance(x1, x2).hi
        if d == 0:
            continue
        c = float(gap) / float(d) ** exponent
        if c < best:
            best, pair = c, (w1, w2)
    return best, pair


def holder_inverse_constant(f: Potential, S: SubshiftOfFiniteType, n: int, k: int,
                            flag_below: float = 1e-6) -> HolderConstant:
    """Largest c with |f(p) - f(q)| >= c d(p, q)^(k/(k-1)) over cylinder points.

    The pairs range over representatives of every cylinder depth from the
    window length (1 for refinable potentials) up to n, so the certified
    constant can only decrease as n grows. Results below `flag_below` are
    flagged as near-collisions.
    """
    if k <= 1:
        raise ValueError("k must be an integer > 1")
    exponent = k / (k - 1)
    first = 1 if f.refinable else f.window_length
    if n < first:
        raise ValueError(f"depth n={n} is below the window length {first}")
    best, pair = math.inf, None
    for depth in range(first, n + 1):
        c, p = _pair_constant(_cylinder_values(f, S, depth), exponent)
        if c < best:
            best, pair = c, p
    if best == math.inf:
        best = 0.0
    best = math.nextafter(best * (1 - 1e-12), 0.0)
    return HolderConstant(best, n, k, pair, best < flag_below)


# ---------------------------------------------------------------------------
# Affine model
# ---------------------------------------------------------------------------

def _default_ratios(alphabet, lam1, lam2) -> dict:
    m = len(alphabet)
    if m == 1:
        return {alphabet[0]: (lam1 + lam2) / 2}
    return {a: lam1 + (lam2 - lam1) * Fraction(i, m - 1) for i, a in enumerate(alphabet)}


class CantorEmbedding:
    """Radix-style embedding of one-sided words into [0, 1].

    Symbol a maps [0, 1] onto [o_a, o_a + rho_a]; the images are disjoint
    and ordered by alphabet position. A word embeds at the left endpoint
    of its cylinder interval, whose length is the product of the ratios.
    """

    def __init__(self, alphabet: Sequence, ratios: Mapping):
        self.alphabet = tuple(alphabet)
        self.ratios = {a: as_fraction(ratios[a]) for a in self.alphabet}
        if any(not (0 < r < 1) for r in self.ratios.values()):
            raise ValueError("contraction ratios must lie in (0, 1)")
        total = sum(self.ratios.values())
        m = len(self.alphabet)
        if m > 1 and total >= 1:
            raise ValueError("ratios sum to >= 1; cylinder images would overlap")
        gap = (1 - total) / (m - 1) if m > 1 else Fraction(0)
        self.offsets = {}
        pos = Fraction(0)
        for a in self.alphabet:
            self.offsets[a] = pos
            pos += self.ratios[a] + gap

    def embed(self, word: Sequence) -> Fraction:
        x, scale = Fraction(0), Fraction(1)
        for a in word:
            x += scale * self.offsets[a]
            scale *= self.ratios[a]
        return x

    def length(self, word: Sequence) -> Fraction:
        out = Fraction(1)
        for a in word:
            out *= self.ratios[a]
        return out


class AffineModelPotential:
    """f(x, y) = a*x + b*y + c on stable/unstable coordinates of a rectangle.

    x embeds the past (c_-1, c_-2, ...) and y the future (c_1, c_2, ...).
    `c` may be a scalar or a per-center-symbol map.
    """

    def __init__(self, a, b, c, alphabet: Sequence, ratios_s: Optional[Mapping] = None,
                 ratios_u: Optional[Mapping] = None, lam1="0.3", lam2="0.5"):
        self.a, self.b = as_fraction(a), as_fraction(b)
        if self.a == 0 or self.b == 0:
            raise ValueError("affine model needs a != 0 and b != 0")
        self.c = {k: as_fraction(v) for k, v in c.items()} if isinstance(c, Mapping) else as_fraction(c)
        self.lam1, self.lam2 = as_fraction(lam1), as_fraction(lam2)
        if not (0 < self.lam1 < self.lam2 < 1):
            raise ValueError("need 0 < lam1 < lam2 < 1")
        alphabet = tuple(alphabet)
        self.alphabet = alphabet
        self.stable = CantorEmbedding(alphabet, ratios_s or _default_ratios(alphabet, self.lam1, self.lam2))
        self.unstable = CantorEmbedding(alphabet, ratios_u or _default_ratios(alphabet, self.lam1, self.lam2))

    def constant(self, center=None) -> Fraction:
        if isinstance(self.c, dict):
            return self.c[center]
        return self.c

    def window_potential(self, left: int, right: int, lam=1) -> WindowPotential:
        lam = as_fraction(lam)
        S = SubshiftOfFiniteType.full_shift(self.alphabet)
        return self.window_potential_on(S, left, right, lam)

    def window_potential_on(self, S: SubshiftOfFiniteType, left: int, right: int, lam=1) -> WindowPotential:
        lam = as_fraction(lam)

        def fn(w):
            past = w[:left][::-1]
            future = w[left + 1:]
            return affine_eval(self, past, future, lam, center=w[left])

        return WindowPotential.from_function(S, left, right, fn)


def affine_eval(f: AffineModelPotential, stable_word, unstable_word, lam=1, center=None) -> Fraction:
    """a*x + b*(lam*y) + c with x, y the embeddings of the two words."""
    x = f.stable.embed(tuple(stable_word))
    y = f.unstable.embed(tuple(unstable_word))
    return f.a * x + f.b * as_fraction(lam) * y + f.constant(center)


def potential_from_json(doc: Mapping) -> Potential:
    if "gauss" in doc:
        return GaussPotential(int(doc["gauss"]["depth"]))
    if "window" in doc:
        spec = doc["window"]
        table = {tuple(_parse_symbol(s) for s in k.split(",")): json_number(v)
                 for k, v in spec["table"].items()}
        return WindowPotential(int(spec["left"]), int(spec["right"]), table)
    raise ValueError("potential JSON needs a 'gauss' or 'window' key")


def perturbation_from_json(doc: Mapping) -> PerturbationSpec:
    kl = int(doc.get("key_left", 0))
    kr = int(doc.get("key_right", kl))
    t = {}
    for k, v in doc.get("t", {}).items():
        key = _parse_symbol(k) if kl == kr == 0 else tuple(_parse_symbol(s) for s in k.split(","))
        t[key] = json_number(v)
    return PerturbationSpec(t, json_number(doc.get("lambda", 1)), kl, kr)


def json_number(v) -> Fraction:
    """Exact rational for a JSON number; floats are read by their decimal repr."""
    if isinstance(v, float):
        return Fraction(repr(v))
    return as_fraction(v)


def _parse_symbol(s: str):
    s = s.strip()
    try:
        return int(s)
    except ValueError:
        return s
