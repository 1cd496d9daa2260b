"""Weight-based set functions and graph cut systems.

A weight-based function is determined by an active-hyperedge map h and a
non-negative weight per hyperedge: f(S) is the total weight of h(S).  The
defining structural condition is multiset containment
h(S&T) + h(S|T) <= h(S) + h(T), which makes every such f submodular.

Graph cut functions are the canonical source: hyperedges are the graph's
edges and h(S) is the set of edges crossing S, in one of three modes
(undirected global, directed global, or s-t with two pinned terminals).
The star-plus-matching construction built here is the extremal family
whose minimum cuts span a space of dimension ~3n/2.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from random import Random
from typing import Callable, Iterable, Mapping

from .oracle import (
    MAX_GROUND_SIZE,
    EnumerationLimitError,
    SetFunction,
    Subset,
    fraction_to_str,
    str_to_fraction,
)

MODES = ("undirected", "directed", "st", "st-directed")
CONDITION_SCAN_LIMIT = 12
MAX_HYPEREDGES = 4096

WeightVector = tuple[Fraction, ...]


@dataclass(frozen=True)
class WeightedGraph:
    """Edge-weighted graph; edges are (tail, head, weight) on vertices 1..n_vertices.

    For the two "st" modes the designated terminals s and t are part of the
    graph but not of the derived ground set.  Parallel edges are allowed and
    stay distinct hyperedges; self-loops are not.
    """

    n_vertices: int
    edges: tuple[tuple[int, int, Fraction], ...]
    mode: str
    s: int | None = None
    t: int | None = None

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.n_vertices < 1:
            raise ValueError("graph needs at least one vertex")
        for tail, head, weight in self.edges:
            if not (1 <= tail <= self.n_vertices and 1 <= head <= self.n_vertices):
                raise ValueError(f"edge ({tail},{head}) outside vertex range")
            if tail == head:
                raise ValueError(f"self-loop at vertex {tail}")
            if weight < 0:
                raise ValueError(f"negative weight on edge ({tail},{head})")
        if self.mode in ("st", "st-directed"):
            if self.s is None or self.t is None:
                raise ValueError("st mode requires designated s and t")
            if self.s == self.t:
                raise ValueError("terminals s and t must differ")
            for term in (self.s, self.t):
                if not 1 <= term <= self.n_vertices:
                    raise ValueError(f"terminal {term} outside vertex range")
            if self.n_vertices < 3:
                raise ValueError("st mode needs at least one non-terminal vertex")
        elif self.s is not None or self.t is not None:
            raise ValueError("terminals are only meaningful in st modes")

    def ground_vertices(self) -> tuple[int, ...]:
        """Vertices that form the ground set, in ascending label order."""
        if self.mode in ("st", "st-directed"):
            return tuple(v for v in range(1, self.n_vertices + 1) if v not in (self.s, self.t))
        return tuple(range(1, self.n_vertices + 1))

    def ground_size(self) -> int:
        return len(self.ground_vertices())


class HyperedgeSystem:
    """Active-hyperedge map over a ground set of size n with m hyperedges.

    The map can be given as a rule (bitmask of ground set -> bitmask of
    hyperedges) or as a full extensional table.  Rule results are cached per
    queried subset, so repeated scans pay the rule cost once.
    """

    def __init__(self, n: int, m: int, mask_fn: Callable[[int], int]) -> None:
        if not 1 <= n <= MAX_GROUND_SIZE:
            raise ValueError(f"ground-set size must be in 1..{MAX_GROUND_SIZE}, got {n}")
        if not 0 <= m <= MAX_HYPEREDGES:
            raise ValueError(f"hyperedge count must be in 0..{MAX_HYPEREDGES}, got {m}")
        self.n = n
        self.m = m
        self._mask_fn = mask_fn
        self._mask_cache: dict[int, int] = {}
        self._index_cache: dict[int, tuple[int, ...]] = {}

    @classmethod
    def from_rule(cls, n: int, m: int, mask_fn: Callable[[int], int]) -> "HyperedgeSystem":
        return cls(n, m, mask_fn)

    @classmethod
    def from_table(cls, n: int, m: int, table: Mapping[int, Iterable[int]]) -> "HyperedgeSystem":
        """Extensional construction; the table must cover all 2^n subsets."""
        masks: dict[int, int] = {}
        for bits in range(1 << n):
            if bits not in table:
                raise ValueError(f"table misses subset bitmask {bits}")
            mask = 0
            for idx in table[bits]:
                if not 0 <= idx < m:
                    raise ValueError(f"hyperedge index {idx} outside 0..{m - 1}")
                mask |= 1 << idx
            masks[bits] = mask
        return cls(n, m, masks.__getitem__)

    def active_mask(self, bits: int) -> int:
        mask = self._mask_cache.get(bits)
        if mask is None:
            mask = self._mask_fn(bits)
            self._mask_cache[bits] = mask
        return mask

    def active_indices(self, bits: int) -> tuple[int, ...]:
        idx = self._index_cache.get(bits)
        if idx is None:
            mask = self.active_mask(bits)
            idx = tuple(i for i in range(self.m) if (mask >> i) & 1)
            self._index_cache[bits] = idx
        return idx

    def active(self, subset: Subset) -> tuple[int, ...]:
        """Sorted hyperedge indices active on `subset`."""
        if subset.n != self.n:
            raise ValueError(f"subset over ground set {subset.n}, system expects {self.n}")
        return self.active_indices(subset.bits)

    def materialize(self) -> "HyperedgeSystem":
        """Extensional copy: every subset evaluated now, rule discarded."""
        table = {bits: self.active_mask(bits) for bits in range(1 << self.n)}
        return HyperedgeSystem(self.n, self.m, table.__getitem__)


def _validate_weights(system: HyperedgeSystem, weights: WeightVector) -> None:
    if len(weights) != system.m:
        raise ValueError(f"expected {system.m} weights, got {len(weights)}")
    for w in weights:
        if w < 0:
            raise ValueError("weights must be non-negative")


def eval_weight_based(system: HyperedgeSystem, weights: WeightVector, subset: Subset) -> Fraction:
    """f(S) = total weight of the hyperedges active on S."""
    _validate_weights(system, weights)
    total = Fraction(0)
    for i in system.active(subset):
        total += weights[i]
    return total


def value_function(system: HyperedgeSystem, weights: WeightVector) -> SetFunction:
    """Closure suitable for oracles and checkers."""
    _validate_weights(system, weights)
    n = system.n

    def fn(subset: Subset) -> Fraction:
        if subset.n != n:
            raise ValueError(f"subset over ground set {subset.n}, system expects {n}")
        total = Fraction(0)
        for i in system.active_indices(subset.bits):
            total += weights[i]
        return total

    return fn


def scaled_value_table(system: HyperedgeSystem, weights: WeightVector) -> tuple[list[int], int]:
    """All 2^n values scaled by the weights' common denominator.

    Exact integer comparisons on the scaled table agree with Fraction
    comparisons on the true values; divide by the returned denominator to
    recover them.
    """
    _validate_weights(system, weights)
    den = 1
    for w in weights:
        den = lcm(den, w.denominator)
    scaled = [int(w * den) for w in weights]
    values = []
    for bits in range(1 << system.n):
        total = 0
        for i in system.active_indices(bits):
            total += scaled[i]
        values.append(total)
    return values, den


def check_weight_based_condition(system: HyperedgeSystem) -> tuple[Subset, Subset] | None:
    """Scan all pairs for the multiset condition h(S&T) + h(S|T) <= h(S) + h(T).

    Each h(S) is a set, so per hyperedge the multiset condition reduces to
    two containments over bitmasks.  Returns the lexicographically first
    violating (S, T) or None.
    """
    if system.n > CONDITION_SCAN_LIMIT:
        raise EnumerationLimitError(f"condition scan capped at n={CONDITION_SCAN_LIMIT}")
    size = 1 << system.n
    masks = [system.active_mask(bits) for bits in range(size)]
    for x in range(size):
        hx = masks[x]
        for y in range(size):
            hy = masks[y]
            hu = masks[x | y]
            hi = masks[x & y]
            if (hi & hu) & ~(hx & hy) or (hi | hu) & ~(hx | hy):
                return Subset(x, system.n), Subset(y, system.n)
    return None


def cut_system_from_graph(graph: WeightedGraph) -> tuple[HyperedgeSystem, WeightVector]:
    """Hyperedge system of the graph's cut function, plus its weight vector.

    Hyperedge i is edge i of the graph, in input order.  Activity of an
    edge on a ground subset S:

    - undirected: exactly one endpoint in S;
    - directed: tail in S, head outside S;
    - st: exactly one endpoint in S together with s (undirected edges);
    - st-directed: tail in S together with s, head outside it.
    """
    edges = graph.edges
    mode = graph.mode
    n = graph.ground_size()
    if mode in ("undirected", "directed"):
        def side(bits: int, v: int) -> int:
            return (bits >> (v - 1)) & 1
    else:
        position = {v: k for k, v in enumerate(graph.ground_vertices())}
        s_vertex, t_vertex = graph.s, graph.t

        def side(bits: int, v: int) -> int:
            if v == s_vertex:
                return 1
            if v == t_vertex:
                return 0
            return (bits >> position[v]) & 1

    if mode in ("undirected", "st"):
        def mask_fn(bits: int) -> int:
            mask = 0
            for idx, (tail, head, _w) in enumerate(edges):
                if side(bits, tail) != side(bits, head):
                    mask |= 1 << idx
            return mask
    else:
        def mask_fn(bits: int) -> int:
            mask = 0
            for idx, (tail, head, _w) in enumerate(edges):
                if side(bits, tail) and not side(bits, head):
                    mask |= 1 << idx
            return mask

    system = HyperedgeSystem.from_rule(n, len(edges), mask_fn)
    weights = tuple(Fraction(w) for _, _, w in edges)
    return system, weights


def cut_value_function(graph: WeightedGraph) -> SetFunction:
    """Convenience: the graph's cut function as a plain set function."""
    system, weights = cut_system_from_graph(graph)
    return value_function(system, weights)


def build_star_matching_graph(n: int) -> WeightedGraph:
    """Star-plus-matching construction on n vertices (undirected mode).

    Odd n = 2a+1: a center joined to every other vertex by a unit edge, and
    a perfect matching of unit edges on the 2a non-center vertices (pairs
    (2i, 2i+1)); every global minimum cut has value 2.  Even n: the odd
    construction on n-1 vertices plus vertex n tied to the center by a
    single edge of weight 2, which adds {n} as one more minimum cut.

    Edge order: star edges by ascending leaf, then matching edges by
    ascending pair, then (even n only) the weight-2 edge last.
    """
    if n < 3:
        raise ValueError("construction needs n >= 3")
    odd = n if n % 2 == 1 else n - 1
    pairs = (odd - 1) // 2
    edges: list[tuple[int, int, Fraction]] = []
    for v in range(2, odd + 1):
        edges.append((1, v, Fraction(1)))
    for i in range(pairs):
        edges.append((2 * i + 2, 2 * i + 3, Fraction(1)))
    if n % 2 == 0:
        edges.append((1, n, Fraction(2)))
    return WeightedGraph(n, tuple(edges), "undirected")


def random_weighted_graph(
    rng: Random,
    n_vertices: int,
    mode: str,
    *,
    edge_prob: float = 0.5,
    connected: bool = False,
    max_numerator: int = 12,
    max_denominator: int = 12,
) -> WeightedGraph:
    """Seeded random graph with positive rational weights.

    Edge set is drawn pair by pair, then sorted so the hyperedge order (and
    everything derived from it) depends only on the rng stream and the
    parameters.  `connected` (undirected only) forces a random spanning tree
    before the extra edges.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    pairs: set[tuple[int, int]] = set()
    if connected:
        if mode != "undirected":
            raise ValueError("connected generation is defined for undirected mode")
        order = list(range(1, n_vertices + 1))
        rng.shuffle(order)
        for k in range(1, n_vertices):
            other = order[rng.randrange(k)]
            a, b = sorted((order[k], other))
            pairs.add((a, b))
    if mode == "directed":
        candidates = [
            (a, b)
            for a in range(1, n_vertices + 1)
            for b in range(1, n_vertices + 1)
            if a != b
        ]
    else:
        candidates = [
            (a, b) for a in range(1, n_vertices + 1) for b in range(a + 1, n_vertices + 1)
        ]
    for pair in candidates:
        if rng.random() < edge_prob:
            pairs.add(pair)
    if not pairs:
        pairs.add(candidates[0])
    edges = tuple(
        (a, b, Fraction(rng.randint(1, max_numerator), rng.randint(1, max_denominator)))
        for a, b in sorted(pairs)
    )
    if mode in ("st", "st-directed"):
        return WeightedGraph(n_vertices, edges, mode, s=1, t=n_vertices)
    return WeightedGraph(n_vertices, edges, mode)


def graph_to_json(graph: WeightedGraph) -> dict:
    data: dict = {
        "n_vertices": graph.n_vertices,
        "mode": graph.mode,
        "edges": [[tail, head, fraction_to_str(w)] for tail, head, w in graph.edges],
    }
    if graph.s is not None:
        data["s"] = graph.s
    if graph.t is not None:
        data["t"] = graph.t
    return data


def graph_from_json(data: Mapping) -> WeightedGraph:
    try:
        edges = tuple(
            (int(tail), int(head), str_to_fraction(str(w))) for tail, head, w in data["edges"]
        )
        return WeightedGraph(
            n_vertices=int(data["n_vertices"]),
            edges=edges,
            mode=str(data["mode"]),
            s=int(data["s"]) if "s" in data else None,
            t=int(data["t"]) if "t" in data else None,
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed graph object: {exc}") from exc


def load_graph(path: str) -> WeightedGraph:
    with open(path, "r", encoding="utf-8") as handle:
        return graph_from_json(json.load(handle))
