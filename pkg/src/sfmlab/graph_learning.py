"""Reconstructing graphs from cut-value queries.

Undirected graphs are exactly learnable from singleton and pair queries.
Directed graphs are learnable only up to shifting weight around directed
cycles, realized here as a feasibility flow plus an exhaustive
cut-equivalence certificate and an explicit shiftable-cycle residual.
For two-terminal cut functions even that fails: a kernel vector in weight
space is orthogonal to every possible query, so terminal-adjacent weights
are provably unidentifiable.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .oracle import EnumerationLimitError, Subset, ValueOracle
from .weight_based import WeightedGraph, cut_value_function

CUT_EQUIVALENCE_LIMIT = 12
ST_KERNEL_VERIFY_LIMIT = 12


class NotACutFunctionError(ValueError):
    """Oracle answers are inconsistent with every graph of the claimed kind."""


@dataclass(frozen=True)
class CycleShift:
    """A directed cycle v1 -> v2 -> ... -> vL -> v1 along which weight can move.

    Shifting by t adds t to every forward pair and removes t from every
    reverse pair; every reverse pair is an existing edge with weight at
    least max_shift, so any t in (0, max_shift] keeps weights non-negative
    while preserving all cut values.
    """

    cycle: tuple[int, ...]
    max_shift: Fraction


@dataclass(frozen=True)
class CycleEquivalenceCertificate:
    """Outcome of directed learning.

    agrees_on_all_cuts is the exhaustive comparison against the oracle
    (None when the vertex count exceeds the scan limit).  residual is a
    shiftable cycle of the learned graph witnessing the remaining
    ambiguity, or None when the learned graph is acyclic and the
    reconstruction is therefore unique.
    """

    learned: WeightedGraph
    agrees_on_all_cuts: bool | None
    residual: CycleShift | None


@dataclass(frozen=True)
class StKernelVector:
    """Weight-space direction invisible to every two-terminal cut query.

    Coordinates are interleaved per non-terminal vertex: (source-side
    weight, sink-side weight).  beta has 1 at both coordinates of the
    special vertex and -1/(k-1) elsewhere; each query reads exactly one
    coordinate per vertex, so every inner product telescopes to zero.
    """

    beta: tuple[Fraction, ...]
    special_vertex: int


def edge_weight_map(graph: WeightedGraph) -> dict[tuple[int, int], Fraction]:
    """Total weight per (tail, head) pair; parallel edges are summed."""
    weights: dict[tuple[int, int], Fraction] = {}
    for tail, head, w in graph.edges:
        key = (tail, head)
        weights[key] = weights.get(key, Fraction(0)) + w
    return weights


def learn_undirected(oracle: ValueOracle) -> WeightedGraph:
    """Exact reconstruction from all singleton and pair cut queries.

    The cut of {u, v} counts every edge at u or v except (u, v) twice over,
    so f({u}) + f({v}) - f({u,v}) is exactly twice that edge's weight.
    Query count: N + C(N,2).
    """
    n = oracle.n
    singles = {u: oracle.evaluate(Subset.of(n, u)) for u in range(1, n + 1)}
    edges = []
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            pair_value = oracle.evaluate(Subset.of(n, u, v))
            weight = (singles[u] + singles[v] - pair_value) / 2
            if weight < 0:
                raise NotACutFunctionError(
                    f"pair ({u},{v}) implies negative weight {weight}"
                )
            if weight > 0:
                edges.append((u, v, weight))
    return WeightedGraph(n, tuple(edges), "undirected")


def _max_flow(
    num_nodes: int,
    arcs: Sequence[tuple[int, int, Fraction]],
    source: int,
    sink: int,
) -> tuple[Fraction, dict[tuple[int, int], Fraction]]:
    """Exact Edmonds-Karp; returns (flow value, residual capacities)."""
    residual: dict[tuple[int, int], Fraction] = {}
    adjacency: list[list[int]] = [[] for _ in range(num_nodes)]
    for a, b, capacity in arcs:
        if (a, b) not in residual:
            adjacency[a].append(b)
            adjacency[b].append(a)
            residual[(a, b)] = Fraction(0)
            residual.setdefault((b, a), Fraction(0))
        residual[(a, b)] += capacity
    total = Fraction(0)
    while True:
        parents: dict[int, int] = {source: source}
        queue = deque([source])
        while queue and sink not in parents:
            x = queue.popleft()
            for y in adjacency[x]:
                if y not in parents and residual[(x, y)] > 0:
                    parents[y] = x
                    queue.append(y)
        if sink not in parents:
            return total, residual
        path = []
        y = sink
        while y != source:
            x = parents[y]
            path.append((x, y))
            y = x
        bottleneck = min(residual[e] for e in path)
        for x, y in path:
            residual[(x, y)] -= bottleneck
            residual[(y, x)] += bottleneck
        total += bottleneck


def learn_directed_up_to_cycles(oracle: ValueOracle) -> CycleEquivalenceCertificate:
    """Learn a directed graph's cut-equivalence class.

    Symmetrizing the oracle (f(S) + f(complement)) gives the undirected cut
    function of the pair-sum graph, so pair sums w(u,v) + w(v,u) are exactly
    learnable; singleton and co-singleton queries give every weighted out-
    and in-degree.  Any split of the pair sums matching the out-degrees is
    cut-equivalent to the hidden graph; one is found as a feasibility flow
    (pair sums as demands, out-degrees as supplies).
    """
    n = oracle.n
    full = (1 << n) - 1

    def symmetrized(subset: Subset) -> Fraction:
        return oracle.evaluate(subset) + oracle.evaluate(Subset(subset.bits ^ full, n))

    pair_sums = edge_weight_map(learn_undirected(ValueOracle(symmetrized, n)))
    out_degree = {u: oracle.evaluate(Subset.of(n, u)) for u in range(1, n + 1)}
    in_degree = {
        u: oracle.evaluate(Subset(full & ~(1 << (u - 1)), n)) for u in range(1, n + 1)
    }
    for u in range(1, n + 1):
        if out_degree[u] < 0 or in_degree[u] < 0:
            raise NotACutFunctionError(f"negative degree at vertex {u}")
        adjacent = sum(
            (w for (a, b), w in pair_sums.items() if u in (a, b)), Fraction(0)
        )
        if out_degree[u] + in_degree[u] != adjacent:
            raise NotACutFunctionError(f"degrees at vertex {u} contradict pair sums")
    total = sum(pair_sums.values(), Fraction(0))
    if sum(out_degree.values(), Fraction(0)) != total:
        raise NotACutFunctionError("total out-degree does not match total weight")

    # source -> vertex (capacity out-degree), vertex -> incident pair and
    # pair -> sink (capacity pair sum); a flow of value `total` saturates
    # both cuts, and the vertex->pair flows are the directed weights.
    pairs = sorted(pair_sums)
    pair_node = {p: n + 1 + idx for idx, p in enumerate(pairs)}
    sink = n + 1 + len(pairs)
    arcs: list[tuple[int, int, Fraction]] = []
    for u in range(1, n + 1):
        arcs.append((0, u, out_degree[u]))
    for p in pairs:
        u, v = p
        arcs.append((u, pair_node[p], pair_sums[p]))
        arcs.append((v, pair_node[p], pair_sums[p]))
        arcs.append((pair_node[p], sink, pair_sums[p]))
    flow, residual = _max_flow(sink + 1, arcs, 0, sink)
    if flow != total:
        raise NotACutFunctionError("pair sums and degrees admit no non-negative split")
    edges = []
    for p in pairs:
        u, v = p
        for tail, head in ((u, v), (v, u)):
            weight = pair_sums[p] - residual[(tail, pair_node[p])]
            if weight > 0:
                edges.append((tail, head, weight))
    edges.sort()
    learned = WeightedGraph(n, tuple(edges), "directed")

    agrees: bool | None = None
    if n <= CUT_EQUIVALENCE_LIMIT:
        learned_fn = cut_value_function(learned)
        agrees = all(
            learned_fn(Subset(bits, n)) == oracle.evaluate(Subset(bits, n))
            for bits in range(1 << n)
        )
    return CycleEquivalenceCertificate(
        learned=learned,
        agrees_on_all_cuts=agrees,
        residual=find_shiftable_cycle(learned),
    )


def cut_equivalent(g1: WeightedGraph, g2: WeightedGraph) -> Subset | None:
    """First subset (by bitmask) where cut values differ, or None if none does."""
    if (
        g1.n_vertices != g2.n_vertices
        or g1.mode != g2.mode
        or g1.s != g2.s
        or g1.t != g2.t
    ):
        raise ValueError("graphs must share vertex set, mode, and terminals")
    n = g1.ground_size()
    if n > CUT_EQUIVALENCE_LIMIT:
        raise EnumerationLimitError(
            f"cut-equivalence scan capped at ground size {CUT_EQUIVALENCE_LIMIT}"
        )
    f1 = cut_value_function(g1)
    f2 = cut_value_function(g2)
    for bits in range(1 << n):
        subset = Subset(bits, n)
        if f1(subset) != f2(subset):
            return subset
    return None


def _unique_weight_map(graph: WeightedGraph) -> dict[tuple[int, int], Fraction]:
    weights: dict[tuple[int, int], Fraction] = {}
    for tail, head, w in graph.edges:
        if (tail, head) in weights:
            raise ValueError("cycle shifts need parallel-free graphs")
        weights[(tail, head)] = w
    return weights


def apply_cycle_shift(graph: WeightedGraph, cycle: Sequence[int], t: Fraction) -> WeightedGraph:
    """Add t along the cycle's forward pairs and remove it from the reverses.

    Every cut is crossed by the cycle equally often in both directions, so
    cut values are untouched; weights must stay non-negative or the shift
    is rejected.  Edges whose weight reaches zero are dropped.
    """
    if graph.mode != "directed":
        raise ValueError("cycle shifts apply to directed graphs")
    cycle = tuple(cycle)
    if len(cycle) < 3 or len(set(cycle)) != len(cycle):
        raise ValueError("cycle must list at least 3 distinct vertices")
    for v in cycle:
        if not 1 <= v <= graph.n_vertices:
            raise ValueError(f"cycle vertex {v} outside range")
    t = Fraction(t)
    weights = _unique_weight_map(graph)
    for idx, a in enumerate(cycle):
        b = cycle[(idx + 1) % len(cycle)]
        weights[(a, b)] = weights.get((a, b), Fraction(0)) + t
        weights[(b, a)] = weights.get((b, a), Fraction(0)) - t
    for (a, b), w in weights.items():
        if w < 0:
            raise ValueError(f"shift drives edge ({a},{b}) to {w}")
    edges = tuple(sorted((a, b, w) for (a, b), w in weights.items() if w > 0))
    return WeightedGraph(graph.n_vertices, edges, "directed")


def find_shiftable_cycle(graph: WeightedGraph) -> CycleShift | None:
    """A positively shiftable directed cycle of length >= 3, or None.

    Two-vertex cycles shift by nothing (each pair is its own reverse), so
    the search closes each positive edge (u, v) with a shortest v -> u path
    that avoids the direct back edge.  The cycle found runs along existing
    edges; it is returned reversed, so the shift direction of
    apply_cycle_shift drains those edges, with max_shift their minimum
    weight.
    """
    if graph.mode != "directed":
        raise ValueError("cycle search applies to directed graphs")
    weights = _unique_weight_map(graph)
    positive = sorted(e for e, w in weights.items() if w > 0)
    adjacency: dict[int, list[int]] = {}
    for a, b in positive:
        adjacency.setdefault(a, []).append(b)
    for heads in adjacency.values():
        heads.sort()
    for u, v in positive:
        parents = {v: 0}
        queue = deque([v])
        found = v == u
        while queue and not found:
            x = queue.popleft()
            for y in adjacency.get(x, ()):
                if x == v and y == u:
                    continue
                if y not in parents:
                    parents[y] = x
                    if y == u:
                        found = True
                        break
                    queue.append(y)
        if u not in parents:
            continue
        path = [u]
        x = parents[u]
        while x != 0:
            path.append(x)
            x = parents[x]
        # path is u, ..., v along reversed parent links; together with the
        # closing edge (u, v) it already lists the forward cycle reversed.
        forward_cycle = [path[0], *reversed(path[1:])]
        shift = min(
            weights[(forward_cycle[idx], forward_cycle[(idx + 1) % len(forward_cycle)])]
            for idx in range(len(forward_cycle))
        )
        return CycleShift(cycle=tuple(path), max_shift=shift)
    return None


def st_query_coefficients(bits: int, k: int) -> tuple[Fraction, ...]:
    """Coefficient vector of the query S (as a bitmask over the k non-terminals).

    The cut separating the source side S from the rest crosses the
    source-side edge of every vertex outside S and the sink-side edge of
    every vertex inside, so each query reads exactly one of the two
    coordinates per vertex.
    """
    coefficients = []
    for u in range(k):
        inside = (bits >> u) & 1
        coefficients.append(Fraction(0 if inside else 1))
        coefficients.append(Fraction(1 if inside else 0))
    return tuple(coefficients)


def st_cut_value(weights: Sequence[Fraction], subset: Subset) -> Fraction:
    """Two-terminal cut value of the star instance with interleaved weights."""
    k = subset.n
    if len(weights) != 2 * k:
        raise ValueError(f"expected {2 * k} weights, got {len(weights)}")
    coefficients = st_query_coefficients(subset.bits, k)
    return sum(
        (Fraction(w) * c for w, c in zip(weights, coefficients)), Fraction(0)
    )


def st_kernel_vector(k: int, u_star: int) -> StKernelVector | None:
    """Query-invisible direction favoring u_star, or None when k < 2.

    With a single non-terminal vertex both of its weights are pinned by
    the two possible queries, so None marks the determinable case.  For
    k >= 2 the off-diagonal value -1/(k-1) is forced: each query picks one
    coordinate per vertex, giving 1 + (k-1) * offdiag, which vanishes for
    no other constant.
    """
    if k < 1:
        raise ValueError("need at least one non-terminal vertex")
    if not 1 <= u_star <= k:
        raise ValueError(f"special vertex {u_star} outside 1..{k}")
    if k < 2:
        return None
    off = Fraction(-1, k - 1)
    beta = []
    for u in range(1, k + 1):
        value = Fraction(1) if u == u_star else off
        beta.extend((value, value))
    kernel = StKernelVector(beta=tuple(beta), special_vertex=u_star)
    if k <= ST_KERNEL_VERIFY_LIMIT:
        for bits in range(1 << k):
            coefficients = st_query_coefficients(bits, k)
            total = sum(
                (b * c for b, c in zip(kernel.beta, coefficients)), Fraction(0)
            )
            if total != 0:
                raise AssertionError(f"kernel not orthogonal at query bitmask {bits}")
    return kernel


def st_indistinguishability_pair(
    k: int, u_star: int, base: Sequence[Fraction] | None = None
) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Two positive weight vectors agreeing on every query, differing at u_star.

    The second vector adds a kernel multiple small enough to stay strictly
    positive; no sequence of two-terminal cut queries can separate the two.
    """
    kernel = st_kernel_vector(k, u_star)
    if kernel is None:
        raise ValueError("k < 2 is fully determinable; no such pair exists")
    if base is None:
        first = tuple(Fraction(1) for _ in range(2 * k))
    else:
        first = tuple(Fraction(w) for w in base)
        if len(first) != 2 * k:
            raise ValueError(f"expected {2 * k} base weights, got {len(first)}")
        if any(w <= 0 for w in first):
            raise ValueError("base weights must be strictly positive")
    scale = Fraction(k - 1, 2) * min(first)
    second = tuple(w + scale * b for w, b in zip(first, kernel.beta))
    return first, second


def star_st_graph(weights: Sequence[Fraction]) -> WeightedGraph:
    """The two-terminal star instance: s joined to each vertex, each to t.

    Takes the interleaved (source-side, sink-side) weight vector; the
    resulting edge list is block-ordered (all s-edges, then all t-edges),
    matching the graph's canonical sorted order.
    """
    if len(weights) < 2 or len(weights) % 2:
        raise ValueError("need an even, positive number of weights")
    k = len(weights) // 2
    edges = []
    for u in range(1, k + 1):
        edges.append((1, 1 + u, Fraction(weights[2 * (u - 1)])))
    for u in range(1, k + 1):
        edges.append((1 + u, k + 2, Fraction(weights[2 * (u - 1) + 1])))
    return WeightedGraph(k + 2, tuple(edges), "st", s=1, t=k + 2)
