"""Subshifts of finite type and their sequences.

A subshift is an ordered alphabet plus a 0/1 transition matrix. Words are
finite admissible strings, and points of the subshift are handled only in
eventually periodic form (`BiSequence`), which keeps equality decidable
and makes every distance computable in closed form.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Optional, Sequence, Union

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from .errors import (CenterSymbolMismatch, EmptySubshift, SymbolNotInAlphabet)
from .intervals import Interval

Symbol = Hashable


# ---------------------------------------------------------------------------
# Subshift of finite type
# ---------------------------------------------------------------------------

class SubshiftOfFiniteType:
    """Alphabet plus 0/1 transition matrix.

    `transitions` may be any array-like or scipy sparse matrix; it is
    stored as a boolean CSR matrix so that recodings with tens of
    thousands of symbols stay cheap.
    """

    def __init__(self, alphabet: Sequence[Symbol], transitions):
        self.alphabet = tuple(alphabet)
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("alphabet contains repeated symbols")
        self.index = {s: i for i, s in enumerate(self.alphabet)}
        n = len(self.alphabet)
        if sparse.issparse(transitions):
            mat = sparse.csr_array(transitions, dtype=bool)
        else:
            arr = np.asarray(transitions)
            if arr.size == 0:
                arr = np.zeros((n, n), dtype=bool)
            if arr.shape != (n, n):
                raise ValueError(f"transition matrix shape {arr.shape} != ({n}, {n})")
            if not np.isin(arr, (0, 1)).all():
                raise ValueError("transition matrix entries must be 0 or 1")
            mat = sparse.csr_array(arr.astype(bool))
        if mat.shape != (n, n):
            raise ValueError(f"transition matrix shape {mat.shape} != ({n}, {n})")
        mat.eliminate_zeros()
        mat.sort_indices()
        self.adjacency = mat

    # -- constructors ------------------------------------------------------

    @classmethod
    def full_shift(cls, k: Union[int, Sequence[Symbol]]) -> "SubshiftOfFiniteType":
        alphabet = list(range(1, k + 1)) if isinstance(k, int) else list(k)
        n = len(alphabet)
        return cls(alphabet, np.ones((n, n), dtype=int))

    @classmethod
    def golden_mean(cls) -> "SubshiftOfFiniteType":
        return cls([1, 2], [[1, 1], [1, 0]])

    @classmethod
    def from_edges(cls, alphabet: Sequence[Symbol],
                   edges: Iterable[tuple]) -> "SubshiftOfFiniteType":
        alphabet = list(alphabet)
        index = {s: i for i, s in enumerate(alphabet)}
        rows, cols = [], []
        for a, b in edges:
            rows.append(index[a])
            cols.append(index[b])
        n = len(alphabet)
        mat = sparse.csr_array((np.ones(len(rows), dtype=bool), (rows, cols)), shape=(n, n))
        return cls(alphabet, mat)

    @classmethod
    def from_json(cls, doc: dict) -> "SubshiftOfFiniteType":
        return cls(doc["alphabet"], doc["transitions"])

    def to_json(self) -> dict:
        return {"alphabet": list(self.alphabet),
                "transitions": self.matrix.astype(int).tolist()}

    # -- basic queries -----------------------------------------------------

    def __len__(self) -> int:
        return len(self.alphabet)

    def __repr__(self) -> str:
        return f"SubshiftOfFiniteType(|A|={len(self)}, edges={self.adjacency.nnz})"

    @property
    def matrix(self) -> np.ndarray:
        return self.adjacency.toarray()

    def _idx(self, symbol: Symbol) -> int:
        try:
            return self.index[symbol]
        except (KeyError, TypeError):
            raise SymbolNotInAlphabet(symbol) from None

    def allowed(self, a: Symbol, b: Symbol) -> bool:
        return bool(self.adjacency[self._idx(a), self._idx(b)])

    @cached_property
    def _succ(self) -> list[tuple[int, ...]]:
        m = self.adjacency
        return [tuple(m.indices[m.indptr[i]:m.indptr[i + 1]]) for i in range(len(self))]

    def successors(self, symbol: Symbol) -> list[Symbol]:
        return [self.alphabet[j] for j in self._succ[self._idx(symbol)]]

    def pruned(self) -> "SubshiftOfFiniteType":
        """Remove symbols without a predecessor or successor, to a fixed point."""
        keep = prune_dead(self.adjacency)
        if keep.all():
            return self
        idx = np.flatnonzero(keep)
        sub = self.adjacency[idx][:, idx]
        return SubshiftOfFiniteType([self.alphabet[i] for i in idx], sub)

    @property
    def is_empty(self) -> bool:
        return not prune_dead(self.adjacency).any()

    @cached_property
    def transitivity(self) -> "Transitivity":
        return certify_transitive(self)

    def words(self, n: int) -> Iterator[tuple]:
        """All admissible words of length n in lexicographic alphabet order."""
        if n <= 0:
            yield ()
            return
        stack = [(i,) for i in range(len(self) - 1, -1, -1)]
        while stack:
            w = stack.pop()
            if len(w) == n:
                yield tuple(self.alphabet[i] for i in w)
                continue
            for j in reversed(self._succ[w[-1]]):
                stack.append(w + (j,))


def prune_dead(adj) -> np.ndarray:
    """Boolean mask of vertices lying on some bi-infinite path."""
    adj = sparse.csr_array(adj, dtype=bool)
    n = adj.shape[0]
    keep = np.ones(n, dtype=bool)
    indeg = np.asarray(adj.sum(axis=0)).ravel().astype(np.int64)
    outdeg = np.asarray(adj.sum(axis=1)).ravel().astype(np.int64)
    adj_t = adj.T.tocsr()
    queue = deque(int(i) for i in np.flatnonzero((indeg == 0) | (outdeg == 0)))
    for i in queue:
        keep[i] = False
    while queue:
        v = queue.popleft()
        for w in adj.indices[adj.indptr[v]:adj.indptr[v + 1]]:
            if keep[w] and w != v:
                indeg[w] -= 1
                if indeg[w] == 0:
                    keep[w] = False
                    queue.append(int(w))
        for u in adj_t.indices[adj_t.indptr[v]:adj_t.indptr[v + 1]]:
            if keep[u] and u != v:
                outdeg[u] -= 1
                if outdeg[u] == 0:
                    keep[u] = False
                    queue.append(int(u))
    return keep


PRESETS = ("full2", "goldenmean", "fullN:k")


def preset(name: str) -> SubshiftOfFiniteType:
    if name == "full2":
        return SubshiftOfFiniteType.full_shift(2)
    if name == "goldenmean":
        return SubshiftOfFiniteType.golden_mean()
    if name.startswith("full") and ":" in name:
        return SubshiftOfFiniteType.full_shift(int(name.split(":", 1)[1]))
    raise ValueError(f"unknown SFT preset {name!r}; expected one of {PRESETS}")


# ---------------------------------------------------------------------------
# Words and sequences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Word:
    symbols: tuple
    start_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __getitem__(self, i):
        return self.symbols[i]

    def at(self, n: int) -> Symbol:
        return self.symbols[n - self.start_index]


def _symbols(w) -> tuple:
    if isinstance(w, Word):
        return w.symbols
    if isinstance(w, PeriodicSequence):
        return w.word
    return tuple(w)


def primitive_root(word: Sequence) -> tuple:
    """Shortest u with word == u^j, via the prefix function."""
    w = tuple(word)
    n = len(w)
    if n == 0:
        return w
    pi = [0] * n
    for i in range(1, n):
        k = pi[i - 1]
        while k and w[i] != w[k]:
            k = pi[k - 1]
        if w[i] == w[k]:
            k += 1
        pi[i] = k
    p = n - pi[-1]
    return w[:p] if n % p == 0 else w


def least_rotation(word: Sequence, key=None) -> int:
    """Offset of the lexicographically least rotation (Booth's algorithm).

    Returns the smallest such offset, so ties resolve to original order.
    """
    w = [key(s) for s in word] if key else list(word)
    n = len(w)
    if n == 0:
        return 0
    s = w + w
    f = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        i = f[j - k - 1]
        while i != -1 and s[j] != s[k + i + 1]:
            if s[j] < s[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if i == -1 and s[j] != s[k + i + 1]:
            if s[j] < s[k + i + 1]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k % n


@dataclass(frozen=True)
class PeriodicSequence:
    """A bi-infinite periodic sequence stored by its canonical period.

    `word` is the least rotation of the primitive root of the input;
    `repetitions` and `rotation` record how the input relates to it
    (input == rotate(word * repetitions, -rotation)).
    """

    word: tuple
    repetitions: int = 1
    rotation: int = 0

    @classmethod
    def from_word(cls, word, key=None) -> "PeriodicSequence":
        w = _symbols(word)
        if not w:
            raise ValueError("period must be nonempty")
        root = primitive_root(w)
        reps = len(w) // len(root)
        off = least_rotation(root, key)
        return cls(root[off:] + root[:off], reps, off)

    def __len__(self) -> int:
        return len(self.word)

    @property
    def period(self) -> int:
        return len(self.word)

    def at(self, n: int) -> Symbol:
        return self.word[n % len(self.word)]

    def rotations(self) -> list[tuple]:
        w = self.word
        return [w[i:] + w[:i] for i in range(len(w))]

    def as_bisequence(self, phase: int = 0) -> "BiSequence":
        w = self.word
        phase %= len(w)
        rot = w[phase:] + w[:phase]
        return BiSequence(rot, (), rot, 0)

    def is_admissible(self, S: SubshiftOfFiniteType) -> bool:
        w = self.word
        return is_admissible(w + w[:1], S)

    def __str__(self) -> str:
        return "(" + ",".join(str(s) for s in self.word) + ")"


@dataclass(frozen=True)
class BiSequence:
    """Eventually periodic bi-infinite sequence  ... L L L core R R R ...

    `core` occupies indices [start, start + len(core)); the periodic word
    `left` repeats to the left of it and `right` to the right.
    """

    left: tuple
    core: tuple
    right: tuple
    start: int = 0

    def __post_init__(self):
        for name in ("left", "core", "right"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if not self.left or not self.right:
            raise ValueError("periodic tails must be nonempty")

    @classmethod
    def periodic(cls, word, phase: int = 0) -> "BiSequence":
        w = _symbols(word)
        phase %= len(w)
        rot = w[phase:] + w[:phase]
        return cls(rot, (), rot, 0)

    @classmethod
    def from_finite(cls, symbols, origin: int, left, right) -> "BiSequence":
        """Core `symbols` with symbols[origin] at index 0."""
        return cls(_symbols(left), tuple(symbols), _symbols(right), -origin)

    @property
    def end(self) -> int:
        return self.start + len(self.core)

    def at(self, n: int) -> Symbol:
        if n < self.start:
            return self.left[(n - self.start) % len(self.left)]
        if n >= self.end:
            return self.right[(n - self.end) % len(self.right)]
        return self.core[n - self.start]

    def window(self, lo: int, hi: int) -> tuple:
        """Symbols at indices lo..hi-1."""
        return tuple(self.at(n) for n in range(lo, hi))

    def shift(self, k: int) -> "BiSequence":
        """sigma^k: the sequence whose index-0 symbol is self.at(k)."""
        return BiSequence(self.left, self.core, self.right, self.start - k)

    def periodic_word(self) -> Optional[tuple]:
        """The period word (phase aligned to index 0) if purely periodic."""
        p = len(primitive_root(self.right))
        lo = self.start - len(self.left) - p
        hi = self.end + len(self.right) + p
        if any(self.at(n) != self.at(n + p) for n in range(lo, hi)):
            return None
        return self.window(0, p)

    def is_admissible(self, S: SubshiftOfFiniteType) -> bool:
        lo = self.start - len(self.left) - 1
        hi = self.end + len(self.right) + 1
        return is_admissible(self.window(lo, hi), S)

    def future(self, anchor: int = 0) -> "OneSidedSequence":
        """Symbols at anchor+1, anchor+2, ... as an unstable one-sided sequence."""
        first = anchor + 1
        if first >= self.end:
            r = len(self.right)
            off = (first - self.end) % r
            return OneSidedSequence("unstable", (), self.right[off:] + self.right[:off])
        pre = self.window(first, self.end)
        return OneSidedSequence("unstable", pre, self.right)

    def past(self, anchor: int = 0) -> "OneSidedSequence":
        """Symbols at anchor-1, anchor-2, ... as a stable one-sided sequence."""
        first = anchor - 1
        ll = len(self.left)
        if first < self.start:
            period = tuple(self.at(first - i) for i in range(ll))
            return OneSidedSequence("stable", (), period)
        pre = tuple(self.at(n) for n in range(first, self.start - 1, -1))
        period = tuple(self.at(self.start - 1 - i) for i in range(ll))
        return OneSidedSequence("stable", pre, period)


@dataclass(frozen=True)
class OneSidedSequence:
    """Eventually periodic one-sided sequence.

    `direction` is "unstable" (indices 1, 2, ...) or "stable" (indices
    -1, -2, ...); `pre` and `period` are listed outward from the origin.
    """

    direction: str
    pre: tuple
    period: tuple

    def __post_init__(self):
        if self.direction not in ("stable", "unstable"):
            raise ValueError("direction must be 'stable' or 'unstable'")
        object.__setattr__(self, "pre", tuple(self.pre))
        object.__setattr__(self, "period", tuple(self.period))
        if not self.period:
            raise ValueError("period must be nonempty")

    def term(self, j: int) -> Symbol:
        """The j-th symbol outward from the origin (j >= 1)."""
        i = j - 1
        if i < len(self.pre):
            return self.pre[i]
        return self.period[(i - len(self.pre)) % len(self.period)]

    def at(self, n: int) -> Symbol:
        if self.direction == "unstable":
            if n < 1:
                raise IndexError(n)
            return self.term(n)
        if n > -1:
            raise IndexError(n)
        return self.term(-n)

    def prefix(self, n: int) -> tuple:
        return tuple(self.term(j) for j in range(1, n + 1))

    def is_admissible(self, S: SubshiftOfFiniteType, anchor: Optional[Symbol] = None) -> bool:
        seq = self.prefix(len(self.pre) + 2 * len(self.period) + 1)
        if self.direction == "stable":
            seq = tuple(reversed(seq))
            if anchor is not None:
                seq = seq + (anchor,)
        elif anchor is not None:
            seq = (anchor,) + seq
        return is_admissible(seq, S)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def is_admissible(w, S: SubshiftOfFiniteType) -> bool:
    """True iff every consecutive pair of `w` is an allowed transition."""
    idx = [S._idx(s) for s in _symbols(w)]
    adj = S.adjacency
    return all(adj[a, b] for a, b in zip(idx, idx[1:]))


def count_strings(S: SubshiftOfFiniteType, x: Symbol, y: Symbol, n: int) -> int:
    """Number of admissible strings of length n+1 from x to y, i.e. (B^n)_{xy}.

    Counts are Python integers, so no overflow is possible.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    i, j = S._idx(x), S._idx(y)
    succ = S._succ
    vec = {i: 1}
    for _ in range(n):
        nxt: dict[int, int] = {}
        for u, c in vec.items():
            for v in succ[u]:
                nxt[v] = nxt.get(v, 0) + c
        vec = nxt
    return vec.get(j, 0)


@dataclass(frozen=True)
class Transitivity:
    transitive: bool
    primitive: bool
    n0: Optional[int]
    period: int
    classes: tuple = field(default=())

    def __bool__(self) -> bool:
        return self.transitive


def certify_transitive(S: SubshiftOfFiniteType, dense_limit: int = 256) -> Transitivity:
    """Certify transitivity of S.

    Returns the least N0 <= |A|^2 with B^N0 entrywise positive when B is
    primitive. For an irreducible but periodic B the period and cyclic
    classes are reported instead. `n0` is left unset for primitive
    matrices larger than `dense_limit` (the cyclic structure is still
    certified).
    """
    n = len(S)
    if n == 0:
        return Transitivity(False, False, None, 0)
    ncomp, labels = connected_components(S.adjacency, directed=True, connection="strong")
    if ncomp != 1 or S.adjacency.nnz == 0:
        return Transitivity(False, False, None, 0)
    # BFS levels; period = gcd of level[u] + 1 - level[v] over edges
    level = [-1] * n
    level[0] = 0
    queue = deque([0])
    succ = S._succ
    g = 0
    while queue:
        u = queue.popleft()
        for v in succ[u]:
            if level[v] < 0:
                level[v] = level[u] + 1
                queue.append(v)
    for u in range(n):
        for v in succ[u]:
            g = math.gcd(g, level[u] + 1 - level[v])
    period = abs(g)
    classes = tuple(tuple(S.alphabet[i] for i in range(n) if level[i] % period == c)
                    for c in range(period))
    if period != 1:
        return Transitivity(True, False, None, period, classes)
    n0 = None
    if n <= dense_limit:
        b = S.matrix.astype(bool)
        p = b.copy()
        for k in range(1, n * n + 1):
            if p.all():
                n0 = k
                break
            p = (p.astype(np.int64) @ b.astype(np.int64)) > 0
    return Transitivity(True, True, n0, 1, classes)


def _one_sided_exact(u: OneSidedSequence, v: OneSidedSequence) -> Fraction:
    n = max(len(u.pre), len(v.pre))
    p = math.lcm(len(u.period), len(v.period))
    total = Fraction(0)
    for j in range(1, n + 1):
        if u.term(j) != v.term(j):
            total += Fraction(1, 2 ** (2 * j + 1))
    block = Fraction(0)
    for j in range(n + 1, n + p + 1):
        if u.term(j) != v.term(j):
            block += Fraction(1, 2 ** (2 * j + 1))
    return total + block / (1 - Fraction(1, 4 ** p))


def _tail(depth: int) -> Fraction:
    # sum_{n > depth} 2^-(2n+1)
    return Fraction(1, 3 * 2 ** (2 * depth + 1))


def sequence_distance(a, b, depth: Optional[int] = None) -> Interval:
    """Enclosure of d(a, b) = sum_n 2^-(2|n|+1) [a_n != b_n].

    With `depth`, indices |n| <= depth are summed and the all-differ tail
    is added to the upper bound. Without it, eventually periodic inputs
    (`BiSequence`, `PeriodicSequence` or same-direction `OneSidedSequence`)
    give the exact value as a degenerate interval.
    """
    if isinstance(a, PeriodicSequence):
        a = a.as_bisequence()
    if isinstance(b, PeriodicSequence):
        b = b.as_bisequence()
    one_sided = isinstance(a, OneSidedSequence)
    if one_sided != isinstance(b, OneSidedSequence):
        raise TypeError("cannot compare a one-sided with a two-sided sequence")
    if one_sided and a.direction != b.direction:
        raise ValueError("one-sided sequences point in different directions")
    if depth is None:
        if one_sided:
            return Interval.point(_one_sided_exact(a, b))
        center = Fraction(1, 2) if a.at(0) != b.at(0) else Fraction(0)
        d = center + _one_sided_exact(a.past(), b.past()) + _one_sided_exact(a.future(), b.future())
        return Interval.point(d)
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if one_sided:
        sign = 1 if a.direction == "unstable" else -1
        idx = [sign * j for j in range(1, depth + 1)]
        sides = 1
    else:
        idx = range(-depth, depth + 1)
        sides = 2
    lower = sum((Fraction(1, 2 ** (2 * abs(n) + 1)) for n in idx if a.at(n) != b.at(n)),
                Fraction(0))
    return Interval(lower, lower + sides * _tail(depth))


def bracket(a, b) -> BiSequence:
    """[a, b]: past (indices <= 0) from b, future (indices >= 1) from a."""
    if isinstance(a, PeriodicSequence):
        a = a.as_bisequence()
    if isinstance(b, PeriodicSequence):
        b = b.as_bisequence()
    if a.at(0) != b.at(0):
        raise CenterSymbolMismatch(f"a_0={a.at(0)!r} != b_0={b.at(0)!r}")
    lo = min(b.start, 0) - len(b.left)
    hi = max(a.end, 1) + len(a.right)
    core = tuple(b.at(n) for n in range(lo, 1)) + tuple(a.at(n) for n in range(1, hi))
    left = tuple(b.at(lo - len(b.left) + i) for i in range(len(b.left)))
    right = tuple(a.at(hi + i) for i in range(len(a.right)))
    return BiSequence(left, core, right, lo)


def factors(samples: Iterable, m: int) -> frozenset:
    """All length-m windows of the given periodic words (wrapped)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    out = set()
    for s in samples:
        w = _symbols(s)
        n = len(w)
        for i in range(n):
            out.add(Word(tuple(w[(i + j) % n] for j in range(m))))
    return frozenset(out)


def subhorseshoe_from_factors(S: SubshiftOfFiniteType, allowed: Iterable) -> SubshiftOfFiniteType:
    """m-block recoding of the sequences all of whose m-factors are allowed.

    The result's alphabet consists of the allowed words (as tuples); u -> v
    is allowed when they overlap in m-1 symbols and the joined (m+1)-word
    is admissible in S. Dead symbols are pruned.
    """
    words = sorted({_symbols(w) for w in allowed}, key=lambda w: tuple(S._idx(s) for s in w))
    if not words:
        raise EmptySubshift("no allowed words")
    m = len(words[0])
    if any(len(w) != m for w in words):
        raise ValueError("allowed words must share one length")
    for w in words:
        if not is_admissible(w, S):
            raise ValueError(f"word {w} is not admissible in S")
    by_prefix: dict[tuple, list[int]] = {}
    for j, w in enumerate(words):
        by_prefix.setdefault(w[:-1], []).append(j)
    rows, cols = [], []
    for i, u in enumerate(words):
        for j in by_prefix.get(u[1:], []):
            if S.allowed(u[-1], words[j][-1]) if m == 1 else True:
                rows.append(i)
                cols.append(j)
    n = len(words)
    mat = sparse.csr_array((np.ones(len(rows), dtype=bool), (rows, cols)), shape=(n, n))
    result = SubshiftOfFiniteType(words, mat).pruned()
    if len(result) == 0:
        raise EmptySubshift("no bi-infinite sequence survives the factor restriction")
    return result


# ---------------------------------------------------------------------------
# Entropy
# ---------------------------------------------------------------------------

def _irreducible_radius(mat: sparse.csr_array, tol: float, max_iter: int = 20000) -> tuple[float, float]:
    """Collatz-Wielandt bounds on the Perron root of an irreducible 0/1 matrix.

    Works with I + B, which is primitive, so the ratio bounds converge.
    """
    n = mat.shape[0]
    a = (sparse.identity(n, format="csr") + mat.astype(np.float64)).tocsr()
    if n <= 600:
        vals, vecs = np.linalg.eig(a.toarray())
        k = int(np.argmax(vals.real))
        v = np.abs(vecs[:, k].real)
    else:
        try:
            from scipy.sparse.linalg import eigs
            vals, vecs = eigs(a, k=1, which="LR", tol=1e-13, maxiter=5000, v0=np.ones(n))
            v = np.abs(vecs[:, 0].real)
        except Exception:  # ARPACK non-convergence; fall back to power iteration
            v = np.ones(n)
    v = np.maximum(v, 1e-300)
    v /= v.max()
    lo, hi = 0.0, math.inf
    for _ in range(max_iter):
        av = a @ v
        ratio = av / v
        lo, hi = max(lo, ratio.min()), min(hi, ratio.max())
        if hi - lo <= tol * lo:
            break
        v = av / av.max()
        v = np.maximum(v, 1e-300)
    # slack for floating point rounding in the ratio computation
    slack = 8 * n * np.finfo(float).eps * hi
    return max(lo - slack - 1.0, 0.0), hi + slack - 1.0


def spectral_radius_bounds(adj, tol: float = 1e-11) -> tuple[float, float]:
    """Rigorous-up-to-rounding bounds on the spectral radius of a 0/1 matrix."""
    adj = sparse.csr_array(adj, dtype=bool)
    if adj.nnz == 0:
        return 0.0, 0.0
    ncomp, labels = connected_components(adj, directed=True, connection="strong")
    coo = adj.tocoo()
    internal = labels[coo.row] == labels[coo.col]
    if not internal.any():
        return 0.0, 0.0
    comps, edge_counts = np.unique(labels[coo.row[internal]], return_counts=True)
    sizes = np.bincount(labels, minlength=ncomp)
    lo_best, hi_best = 0.0, 0.0
    for c, ne in zip(comps, edge_counts):
        size = sizes[c]
        if ne == size:
            # a single cycle: spectral radius exactly 1
            lo, hi = 1.0, 1.0
        else:
            idx = np.flatnonzero(labels == c)
            lo, hi = _irreducible_radius(adj[idx][:, idx], tol)
            lo = max(lo, 1.0)
        lo_best, hi_best = max(lo_best, lo), max(hi_best, hi)
    return lo_best, hi_best


def entropy(S: SubshiftOfFiniteType, tol: float = 1e-9) -> Interval:
    """Topological entropy log(rho(B)) enclosed by Collatz-Wielandt bounds.

    Raises EmptySubshift if no bi-infinite sequence exists (entropy is
    undefined there, as opposed to 0 for a finite set of periodic orbits).
    """
    P = S.pruned()
    if len(P) == 0:
        raise EmptySubshift("empty subshift has no entropy")
    lo, hi = spectral_radius_bounds(P.adjacency, tol=tol / 4)
    lo_h = math.log(lo) if lo > 1.0 else 0.0
    hi_h = math.log(hi) if hi > 1.0 else 0.0
    lo_h = max(0.0, math.nextafter(lo_h, -math.inf)) if lo_h > 0 else 0.0
    hi_h = math.nextafter(hi_h, math.inf) if hi_h > 0 else 0.0
    return Interval(Fraction(lo_h), Fraction(hi_h))
