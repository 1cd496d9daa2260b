"""Shared fixture graphs and small helpers used across test modules."""

from fractions import Fraction

from sfmlab import Subset, ValueOracle, WeightedGraph, build_star_matching_graph, cut_value_function


def unit(u: int, v: int) -> tuple[int, int, Fraction]:
    return (u, v, Fraction(1))


def triangle() -> WeightedGraph:
    # star-plus-matching at n=3 degenerates to the unit triangle
    return build_star_matching_graph(3)


def path3() -> WeightedGraph:
    return WeightedGraph(3, (unit(1, 2), unit(2, 3)), "undirected")


def parallel_paths() -> WeightedGraph:
    """Two disjoint s-t paths: s=1, a=2, b=3, t=4. Every cut costs 2."""
    return WeightedGraph(4, (unit(1, 2), unit(2, 4), unit(1, 3), unit(3, 4)), "st", s=1, t=4)


def directed_3cycle() -> WeightedGraph:
    return WeightedGraph(3, (unit(1, 2), unit(2, 3), unit(3, 1)), "directed")


def cut_oracle(graph: WeightedGraph) -> ValueOracle:
    return ValueOracle(cut_value_function(graph), graph.ground_size())


def members(n: int, *elements: int) -> Subset:
    return Subset.from_members(n, elements)


def nontrivial_min(fn, n: int) -> Fraction:
    return min(fn(Subset(bits, n)) for bits in range(1, (1 << n) - 1))
