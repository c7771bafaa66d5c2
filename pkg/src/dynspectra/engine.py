"""Markov and Lagrange values, minimum of the Markov spectrum, sublevel sets.

For a locally constant potential the Markov value of a sequence is the
largest weight met along its path in the window graph, so the minimum of
the Markov spectrum is a minimum-bottleneck cycle problem. The Gauss
potential is handled through the same graph with interval weights; its
graph at large depth is grown by refinement, discarding windows whose
lower bound already exceeds a certified upper bound for the answer.
"""

from __future__ import annotations

import math
import os
from bisect import bisect_right
from collections import defaultdict, deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from .classical import SurdSum
from .errors import BudgetExceeded, EmptyGraph, EmptySubshift, NoSecondCycle
from .intervals import Interval, as_fraction
from .potentials import GaussPotential, PerturbedPotential, Potential, WindowPotential
from .symbolic import (BiSequence, PeriodicSequence, SubshiftOfFiniteType, _symbols, entropy)

DEFAULT_BUDGET = 2_000_000


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("SPECTRA_THREADS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# Orbit values
# ---------------------------------------------------------------------------

def _as_bisequence(x) -> BiSequence:
    if isinstance(x, BiSequence):
        return x
    if isinstance(x, PeriodicSequence):
        return x.as_bisequence()
    return BiSequence.periodic(_symbols(x))


def _window_value(f: Potential, x: BiSequence, n: int) -> Interval:
    return f.value(x.window(n - f.left, n + f.right + 1))


def markov_value(x, f: Potential) -> Interval:
    """sup over n of f at position n, for a periodic or eventually periodic x.

    Positions are scanned over the core, one period of each tail and the
    window radius on either side, after which windows repeat.
    """
    x = _as_bisequence(x)
    lo = x.start - len(x.left) - f.right - 1
    hi = x.end + len(x.right) + f.left + 1
    best = None
    for n in range(lo, hi):
        v = _window_value(f, x, n)
        best = v if best is None else best.max(v)
    return best


def lagrange_value(x, f: Potential) -> Interval:
    """limsup of f along the forward orbit: the max over the forward tail's period."""
    x = _as_bisequence(x)
    first = x.end + f.left
    best = None
    for n in range(first, first + len(x.right)):
        v = _window_value(f, x, n)
        best = v if best is None else best.max(v)
    return best


def exact_value(f: Potential, x: BiSequence, n: int = 0):
    """f at position n as an exact number (Fraction or SurdSum), or None."""
    if isinstance(f, WindowPotential):
        return SurdSum.of(f.value(x.window(n - f.left, n + f.right + 1)).lo)
    if isinstance(f, GaussPotential):
        return f.exact(x, n)
    if isinstance(f, PerturbedPotential):
        base = exact_value(f.base, x, n)
        if base is None:
            return None
        return base + f.spec.t.get(f.spec.key_at(x, n), Fraction(0))
    return None


def exact_markov_value(x, f: Potential):
    """Exact sup over n of f at position n, or None if f has no exact form.

    Scans the same positions as `markov_value`. For eventually periodic x
    the values along each tail converge to the tail's own periodic values,
    which are included since the sup may only be approached in the limit.
    """
    x = _as_bisequence(x)
    word = x.periodic_word()
    best = None
    if word is not None:
        positions = range(len(word))
    else:
        positions = range(x.start - len(x.left) - f.right - 1, x.end + len(x.right) + f.left + 1)
        for tail in (x.left, x.right):
            v = exact_markov_value(BiSequence.periodic(tail), f)
            if v is None:
                return None
            if best is None or v > best:
                best = v
    for n in positions:
        v = exact_value(f, x, n)
        if v is None:
            return None
        if best is None or v > best:
            best = v
    return best


# ---------------------------------------------------------------------------
# Window graph
# ---------------------------------------------------------------------------

def _live(words: Iterable[tuple]) -> set:
    """Windows lying on a bi-infinite path (prune dead ends to a fixed point)."""
    words = set(words)
    while True:
        heads = {w[:-1] for w in words}
        tails = {w[1:] for w in words}
        keep = {w for w in words if w[:-1] in tails and w[1:] in heads}
        if len(keep) == len(words):
            return keep
        words = keep


def _refined_windows(S: SubshiftOfFiniteType, f: Potential, radius: int,
                     bound: Optional[Fraction], budget: int) -> set:
    """Live centered windows of the given radius whose enclosure can be <= bound.

    Windows of radius j+1 are built from chains of three overlapping live
    windows of radius j; since enclosures shrink as windows grow, a
    window discarded at radius j has no surviving extension.
    """
    def keep(w):
        return bound is None or f.value(w).lo <= bound

    level = _live(w for w in S.words(3) if keep(w))
    for _ in range(2, radius + 1):
        by_head = defaultdict(list)
        for w in level:
            by_head[w[:-1]].append(w)
        nxt = []
        seen = 0
        for w in level:
            for v in by_head.get(w[1:], ()):
                for z in by_head.get(v[1:], ()):
                    seen += 1
                    if seen > budget:
                        raise BudgetExceeded(f"window refinement exceeded {budget} candidates")
                    u = w + (v[-1], z[-1])
                    if keep(u):
                        nxt.append(u)
        level = _live(nxt)
    return level


@dataclass
class WindowGraph:
    """Sliding-window recoding of a subshift, with potential weights on edges.

    Edge words have length `edge_length`; the potential is evaluated on
    the window starting at the edge word's first symbol, and the edge
    stands for the sequence position `left` symbols into the word.
    """

    S: SubshiftOfFiniteType
    potential: Potential
    left: int
    window_length: int
    words: list
    weights: list

    def __post_init__(self):
        self.edge_length = len(self.words[0]) if self.words else max(self.window_length, 2)
        node_index: dict[tuple, int] = {}
        src, dst = [], []
        for w in self.words:
            src.append(node_index.setdefault(w[:-1], len(node_index)))
            dst.append(node_index.setdefault(w[1:], len(node_index)))
        self.nodes = list(node_index)
        self.src = np.asarray(src, dtype=np.int64)
        self.dst = np.asarray(dst, dtype=np.int64)
        self._ranks = {}

    @classmethod
    def build(cls, S: SubshiftOfFiniteType, f: Potential, bound=None, radius: Optional[int] = None,
              budget: int = DEFAULT_BUDGET) -> "WindowGraph":
        """All live windows of S, or for refinable potentials those whose
        lower bound is <= `bound` (None keeps everything)."""
        bound = None if bound is None or bound == math.inf else as_fraction(bound)
        if f.refinable and (radius if radius is not None else max(f.left, f.right)) >= 1:
            r = radius if radius is not None else max(f.left, f.right)
            words = _refined_windows(S, f, r, bound, budget)
            left, wl = r, 2 * r + 1
        else:
            wl = f.window_length
            e = max(wl, 2)
            count = 0
            words = []
            for w in S.words(e):
                count += 1
                if count > budget:
                    raise BudgetExceeded(f"window enumeration exceeded {budget} words")
                words.append(w)
            words = _live(words)
            left = f.left
        order = sorted(words, key=lambda w: [S.index[s] for s in w])
        weights = [f.value(w[:wl]) for w in order]
        if bound is not None:
            kept = [(w, v) for w, v in zip(order, weights) if v.lo <= bound]
            order = [w for w, _ in kept]
            weights = [v for _, v in kept]
            order_set = _live(order)
            kept = [(w, v) for w, v in zip(order, weights) if w in order_set]
            order = [w for w, _ in kept]
            weights = [v for _, v in kept]
        return cls(S, f, left, wl, order, weights)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return len(self.words)

    def symbol(self, e: int):
        return self.words[e][self.left]

    def ranks(self, side: str) -> tuple[np.ndarray, list]:
        """(rank of each edge weight, sorted distinct values) for side 'lo' or 'hi'."""
        if side not in self._ranks:
            vals = [getattr(v, side) for v in self.weights]
            distinct = sorted(set(vals))
            pos = {v: i for i, v in enumerate(distinct)}
            self._ranks[side] = (np.fromiter((pos[v] for v in vals), dtype=np.int64,
                                             count=len(vals)), distinct)
        return self._ranks[side]

    def mask_at(self, t, side: str = "lo") -> np.ndarray:
        rank, distinct = self.ranks(side)
        k = bisect_right(distinct, as_fraction(t)) - 1
        return rank <= k

    def cyclic_edges(self, mask: np.ndarray) -> np.ndarray:
        """Edges of the masked graph lying inside a strongly connected component."""
        if not mask.any():
            return mask.copy()
        n = self.n_nodes
        adj = sparse.csr_array((np.ones(int(mask.sum()), dtype=np.int8),
                                (self.src[mask], self.dst[mask])), shape=(n, n))
        _, labels = connected_components(adj, directed=True, connection="strong")
        return mask & (labels[self.src] == labels[self.dst])

    def live_edges(self, mask: np.ndarray) -> np.ndarray:
        """Edges of the masked graph that lie on a bi-infinite path."""
        mask = mask.copy()
        n = self.n_nodes
        while True:
            outdeg = np.bincount(self.src[mask], minlength=n)
            indeg = np.bincount(self.dst[mask], minlength=n)
            keep = mask & (indeg[self.src] > 0) & (outdeg[self.dst] > 0)
            if (keep == mask).all():
                return keep
            mask = keep

    def edge_shift(self, mask: Optional[np.ndarray] = None) -> SubshiftOfFiniteType:
        """The masked graph as an SFT on edge words, dead edges removed."""
        mask = np.ones(self.n_edges, dtype=bool) if mask is None else mask
        idx = np.flatnonzero(self.live_edges(mask))
        words = [self.words[i] for i in idx]
        out_by_node = defaultdict(list)
        for j, i in enumerate(idx):
            out_by_node[self.src[i]].append(j)
        rows, cols = [], []
        for j, i in enumerate(idx):
            for k in out_by_node.get(self.dst[i], ()):
                rows.append(j)
                cols.append(k)
        m = len(words)
        mat = sparse.csr_array((np.ones(len(rows), dtype=bool), (rows, cols)), shape=(m, m))
        return SubshiftOfFiniteType(words, mat)

    def node_shift(self, mask: np.ndarray) -> SubshiftOfFiniteType:
        """Vertex shift on the masked graph; same entropy as the edge shift."""
        n = self.n_nodes
        mat = sparse.csr_array((np.ones(int(mask.sum()), dtype=bool),
                                (self.src[mask], self.dst[mask])), shape=(n, n))
        return SubshiftOfFiniteType(list(range(n)), mat)

    def cycle_word(self, edges: Sequence[int]) -> tuple:
        return tuple(self.symbol(e) for e in edges)

    def __repr__(self) -> str:
        return f"WindowGraph(nodes={self.n_nodes}, edges={self.n_edges}, window={self.window_length})"


# ---------------------------------------------------------------------------
# Bottleneck search
# ---------------------------------------------------------------------------

def _bottleneck(G: WindowGraph, side: str) -> Optional[int]:
    """Rank of the least threshold whose subgraph contains a cycle."""
    rank, distinct = G.ranks(side)
    if not len(distinct) or not G.cyclic_edges(np.ones(G.n_edges, dtype=bool)).any():
        return None
    lo, hi = 0, len(distinct) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if G.cyclic_edges(rank <= mid).any():
            hi = mid
        else:
            lo = mid + 1
    return lo


def _shortest_cycles(G: WindowGraph, mask: np.ndarray) -> list[list[int]]:
    """All shortest cycles (as edge lists, each listed once) of the masked graph."""
    cyc = G.cyclic_edges(mask)
    edges = np.flatnonzero(cyc)
    out_edges = defaultdict(list)
    for e in edges:
        out_edges[int(G.src[e])].append(int(e))
    nodes = sorted(set(int(G.src[e]) for e in edges))
    girth = math.inf
    for s in nodes:
        dist = {s: 0}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            if dist[u] + 1 >= girth:
                break
            for e in out_edges[u]:
                v = int(G.dst[e])
                if v == s:
                    girth = min(girth, dist[u] + 1)
                elif v not in dist:
                    dist[v] = dist[u] + 1
                    queue.append(v)
    if girth == math.inf:
        return []
    cycles = []
    # every cycle is reported from its smallest node, so each appears once
    for s in nodes:
        stack = [(s, [])]
        while stack:
            u, path = stack.pop()
            if len(path) == girth:
                continue
            for e in out_edges[u]:
                v = int(G.dst[e])
                if v == s and len(path) + 1 == girth:
                    cycles.append(path + [e])
                elif v > s and len(path) + 1 < girth:
                    stack.append((v, path + [e]))
    return cycles


def _canonical(G: WindowGraph, word: tuple) -> PeriodicSequence:
    return PeriodicSequence.from_word(word, key=G.S._idx)


def _best_cycle(G: WindowGraph, mask: np.ndarray) -> tuple[list[int], PeriodicSequence]:
    """Shortest cycle, ties broken by the least canonical rotation."""
    best = None
    for cyc in _shortest_cycles(G, mask):
        ps = _canonical(G, G.cycle_word(cyc))
        key = [G.S._idx(s) for s in ps.word]
        if best is None or key < best[0]:
            best = (key, cyc, ps)
    return best[1], best[2]


def _cycle_through(G: WindowGraph, mask: np.ndarray, e: int) -> list[int]:
    """Shortest cycle in the masked graph using edge e."""
    target = int(G.src[e])
    start = int(G.dst[e])
    out_edges = defaultdict(list)
    for f in np.flatnonzero(mask):
        out_edges[int(G.src[f])].append(int(f))
    prev = {start: None}
    queue = deque([start])
    while queue and target not in prev:
        u = queue.popleft()
        for f in out_edges[u]:
            v = int(G.dst[f])
            if v not in prev:
                prev[v] = (u, f)
                queue.append(v)
    path = []
    node = target
    while node != start:
        u, f = prev[node]
        path.append(f)
        node = u
    return [e] + path[::-1]


@dataclass(frozen=True)
class CycleCertificate:
    cycle: PeriodicSequence
    value: Interval
    attaining_offset: int
    potential: Potential = field(repr=False, compare=False, default=None)

    def recompute(self) -> Interval:
        return markov_value(self.cycle, self.potential)

    def exact_value(self):
        return exact_markov_value(self.cycle.as_bisequence(), self.potential)

    @property
    def period(self) -> int:
        return len(self.cycle.word)


def certificate_for(word: Sequence, f: Potential, S: Optional[SubshiftOfFiniteType] = None) -> CycleCertificate:
    ps = PeriodicSequence.from_word(word, key=S._idx if S is not None else None)
    x = ps.as_bisequence()
    vals = [_window_value(f, x, n) for n in range(len(ps.word))]
    value = vals[0]
    for v in vals[1:]:
        value = value.max(v)
    offset = max(range(len(vals)), key=lambda i: (vals[i].hi, vals[i].lo, -i))
    return CycleCertificate(ps, value, offset, f)


@dataclass(frozen=True)
class _Search:
    min_value: Fraction
    cycle: PeriodicSequence
    cycle_edges: tuple
    second_value: Optional[Fraction]
    second_cycle: Optional[PeriodicSequence]


def _search(G: WindowGraph, side: str, with_second: bool = True) -> Optional[_Search]:
    k = _bottleneck(G, side)
    if k is None:
        return None
    rank, distinct = G.ranks(side)
    mask = rank <= k
    edges, cycle = _best_cycle(G, mask)
    if not with_second:
        return _Search(distinct[k], cycle, tuple(edges), None, None)
    on_cycle = np.zeros(G.n_edges, dtype=bool)
    on_cycle[edges] = True

    def other_cycle(j):
        return (G.cyclic_edges(rank <= j) & ~on_cycle).any()

    top = len(distinct) - 1
    if not other_cycle(top):
        return _Search(distinct[k], cycle, tuple(edges), None, None)
    lo, hi = k, top
    while lo < hi:
        mid = (lo + hi) // 2
        if other_cycle(mid):
            hi = mid
        else:
            lo = mid + 1
    m2 = rank <= lo
    e = int(np.flatnonzero(G.cyclic_edges(m2) & ~on_cycle)[0])
    second = _canonical(G, G.cycle_word(_cycle_through(G, m2, e)))
    return _Search(distinct[k], cycle, tuple(edges), distinct[lo], second)


@dataclass(frozen=True)
class SpectrumReport:
    min_value: Interval
    minimizing_cycle: CycleCertificate
    second_value: Optional[Interval]
    second_cycle: Optional[CycleCertificate]
    gap: Optional[Interval]
    isolated: bool
    ambiguous: bool
    radius: int
    node_count: int
    edge_count: int


def _deepened(f: Potential, radius: int) -> Potential:
    if isinstance(f, GaussPotential):
        return GaussPotential(radius)
    if isinstance(f, PerturbedPotential) and isinstance(f.base, GaussPotential):
        return PerturbedPotential(GaussPotential(max(radius, f.base.depth)), f.spec)
    return f


def _refinable_graph(S, f, budget) -> WindowGraph:
    radius = max(f.left, f.right)
    coarse = WindowGraph.build(S, f, radius=min(radius, 3), budget=budget)
    if coarse.n_edges == 0:
        raise EmptyGraph("no bi-infinite sequence in the subshift")
    found = _search(coarse, "hi")
    if found is None:
        raise EmptyGraph("window graph has no cycle")
    bound = certificate_for(found.cycle.word, f, S).value.hi
    if found.second_cycle is not None:
        bound = max(bound, certificate_for(found.second_cycle.word, f, S).value.hi)
    return WindowGraph.build(S, f, bound=bound, budget=budget)


def min_markov(S: SubshiftOfFiniteType, f: Potential, depth_cap: Optional[int] = None,
               budget: int = DEFAULT_BUDGET) -> SpectrumReport:
    """Minimum of the Markov spectrum of (S, f) and its isolation gap.

    The minimum over all cycles of the largest edge weight is found by
    binary search over the distinct weights. With interval weights the
    search runs on lower and on upper endpoints; when the two disagree on
    the minimizing cycle the depth is raised up to `depth_cap` and the
    report is marked ambiguous if they still disagree.

    The second value is the least threshold at which some edge outside the
    certificate cycle lies on a cycle, so ties with the minimum give a
    zero gap.
    """
    if depth_cap is None:
        depth_cap = max(f.left, f.right) + 8
    while True:
        G = _refinable_graph(S, f, budget) if f.refinable else WindowGraph.build(S, f, budget=budget)
        if G.n_edges == 0:
            raise EmptyGraph("no bi-infinite sequence in the subshift")
        lower = _search(G, "lo")
        upper = _search(G, "hi")
        if lower is None or upper is None:
            raise EmptyGraph("window graph has no cycle")
        agree = lower.cycle.word == upper.cycle.word
        radius = max(f.left, f.right)
        if agree or not f.refinable or radius >= depth_cap:
            break
        f = _deepened(f, min(depth_cap, radius + 4))
    cert = certificate_for(upper.cycle.word, f, S)
    min_value = Interval(lower.min_value, upper.min_value)
    second = second_cert = gap = None
    if lower.second_value is not None and upper.second_value is not None:
        second = Interval(lower.second_value, upper.second_value)
        second_cert = certificate_for(upper.second_cycle.word, f, S)
        gap = Interval(max(Fraction(0), second.lo - min_value.hi),
                       max(Fraction(0), second.hi - min_value.lo))
    return SpectrumReport(
        min_value=min_value, minimizing_cycle=cert, second_value=second,
        second_cycle=second_cert, gap=gap, isolated=gap is not None and gap.lo > 0,
        ambiguous=not agree, radius=max(f.left, f.right),
        node_count=G.n_nodes, edge_count=G.n_edges)


def isolation_gap(S: SubshiftOfFiniteType, f: Potential, **kw) -> Interval:
    """Enclosure of (second cycle value) - (minimum)."""
    report = min_markov(S, f, **kw)
    if report.gap is None:
        raise NoSecondCycle("the window graph has a single cycle")
    return report.gap


# ---------------------------------------------------------------------------
# Sublevel sets and entropy
# ---------------------------------------------------------------------------

def _graph_for_threshold(S, f, t, radius, budget) -> WindowGraph:
    if f.refinable:
        return WindowGraph.build(S, f, bound=t, radius=radius, budget=budget)
    return WindowGraph.build(S, f, budget=budget)


def sublevel(S: SubshiftOfFiniteType, f: Potential, t, radius: Optional[int] = None,
             budget: int = DEFAULT_BUDGET) -> SubshiftOfFiniteType:
    """Sequences whose every window can have value <= t, as an edge shift.

    The alphabet of the result consists of window words; the symbol of the
    original sequence is the one at offset `f.left` (or the radius, for
    refinable potentials). The result may be empty.
    """
    t = math.inf if t == math.inf else as_fraction(t)
    G = _graph_for_threshold(S, f, t, radius, budget)
    if G.n_edges == 0:
        return SubshiftOfFiniteType([], np.zeros((0, 0), dtype=bool))
    mask = np.ones(G.n_edges, dtype=bool) if t == math.inf else G.mask_at(t, "lo")
    return G.edge_shift(mask)


def project_words(R: SubshiftOfFiniteType, n: int, offset: int) -> set:
    """Symbol words of length n of a window-alphabet shift."""
    return {tuple(w[offset] for w in word) for word in R.words(n)}


@dataclass(frozen=True)
class EntropyPoint:
    t: Fraction
    entropy: Optional[Interval]
    node_count: int
    edge_count: int

    @property
    def empty(self) -> bool:
        return self.entropy is None


def _masked_entropy(G: WindowGraph, mask: np.ndarray, tol: float) -> Optional[Interval]:
    live = G.live_edges(mask)
    if not live.any():
        return None
    try:
        return entropy(G.node_shift(live), tol=tol)
    except EmptySubshift:
        return None


def entropy_curve(S: SubshiftOfFiniteType, f: Potential, t_grid: Sequence, radius: Optional[int] = None,
                  tol: float = 1e-9, budget: int = DEFAULT_BUDGET,
                  threads: Optional[int] = None) -> list[EntropyPoint]:
    """Enclosures of the entropy of the sublevel set at each t.

    The upper bound keeps windows whose lower endpoint is <= t (a superset
    of the sublevel language), the lower bound keeps windows whose upper
    endpoint is <= t (a subset). Since the true curve is nondecreasing,
    bounds are tightened across the grid by running max / min.
    Refinable potentials default to radius 6 here.
    """
    ts = [as_fraction(t) for t in t_grid]
    if any(a > b for a, b in zip(ts, ts[1:])):
        raise ValueError("t_grid must be sorted")
    if not ts:
        return []
    if f.refinable and radius is None:
        radius = min(max(f.left, f.right), 6)
    G = _graph_for_threshold(S, f, ts[-1], radius, budget)

    def point(t):
        if G.n_edges == 0:
            return None, None, 0, 0
        outer = G.live_edges(G.mask_at(t, "lo"))
        inner = G.live_edges(G.mask_at(t, "hi"))
        up = _masked_entropy(G, outer, tol)
        low = _masked_entropy(G, inner, tol)
        nodes = len(set(G.src[outer].tolist()) | set(G.dst[outer].tolist()))
        return low, up, nodes, int(outer.sum())

    workers = threads or thread_count()
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            raw = list(ex.map(point, ts))
    else:
        raw = [point(t) for t in ts]
    lows = [Fraction(0) if low is None else low.lo for low, _, _, _ in raw]
    ups = [None if up is None else up.hi for _, up, _, _ in raw]
    for i in range(1, len(lows)):
        lows[i] = max(lows[i], lows[i - 1])
    for i in range(len(ups) - 2, -1, -1):
        if ups[i] is not None and ups[i + 1] is not None:
            ups[i] = min(ups[i], ups[i + 1])
    out = []
    for t, lo, hi, (_, up, nodes, edges) in zip(ts, lows, ups, raw):
        out.append(EntropyPoint(t, None if up is None else Interval(min(lo, hi), hi), nodes, edges))
    return out


# ---------------------------------------------------------------------------
# Periodic sampling
# ---------------------------------------------------------------------------

def lyndon_words(S: SubshiftOfFiniteType, max_length: int, budget: int = DEFAULT_BUDGET) -> Iterator[tuple]:
    """Admissible Lyndon words (cyclically admissible) of length <= max_length.

    Prenecklaces are generated in alphabet order, extending only along
    allowed transitions.
    """
    k = len(S)
    succ = S._succ
    a: list[int] = []
    count = 0

    def rec(p: int):
        nonlocal count
        t = len(a)
        if t and p == t and S.adjacency[a[-1], a[0]]:
            count += 1
            if count > budget:
                raise BudgetExceeded(f"more than {budget} cycles")
            yield tuple(S.alphabet[i] for i in a)
        if t == max_length:
            return
        floor = a[t - p] if t else 0
        options = range(k) if not t else succ[a[-1]]
        for j in options:
            if j < floor:
                continue
            a.append(j)
            yield from rec(p if t and j == floor else t + 1)
            a.pop()

    yield from rec(1)


@dataclass(frozen=True)
class SampleValue:
    value: Interval
    exact: object
    cycles: tuple

    def __lt__(self, other):
        return self.value.lo < other.value.lo


def periodic_spectrum_sample(S: SubshiftOfFiniteType, f: Potential, max_period: int,
                             budget: int = 200_000, exact: bool = True) -> list[SampleValue]:
    """Distinct Markov values of primitive periodic orbits of period <= max_period.

    Values are deduplicated on their exact form when one is available
    (table and Gauss-type potentials), otherwise on the enclosure.
    """
    if max_period < 1:
        raise ValueError("max_period must be >= 1")
    groups: dict = {}
    for word in lyndon_words(S, max_period, budget):
        x = BiSequence.periodic(word)
        val = markov_value(x, f)
        ex = exact_markov_value(x, f) if exact else None
        key = ex if ex is not None else (val.lo, val.hi)
        if key in groups:
            groups[key][2].append(PeriodicSequence.from_word(word, key=S._idx))
        else:
            groups[key] = (val, ex, [PeriodicSequence.from_word(word, key=S._idx)])
    out = [SampleValue(v, ex, tuple(c)) for v, ex, c in groups.values()]
    if all(s.exact is not None for s in out):
        out.sort(key=lambda s: _ExactKey(s.exact))
    else:
        out.sort(key=lambda s: (s.value.lo, s.value.hi))
    return out


class _ExactKey:
    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return self.v < other.v
