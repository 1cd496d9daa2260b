"""Minimizer families and the rank machinery over their indicator vectors.

For a weight-based f, each minimizer S gets the 0/1 vector over hyperedges
that are active on S and carry strictly positive weight.  The rank of all
minimizer vectors (over the rationals) is the cut dimension; computed for
the non-trivial family it measures how many queries a perturbation argument
can charge, and computed for the trivial-allowed family it is bounded by
n+1 via per-element base sets, which verify_span_bound checks from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .oracle import EnumerationLimitError, Subset
from .weight_based import HyperedgeSystem, WeightVector, scaled_value_table

DIMENSION_SCAN_LIMIT = 16


@dataclass(frozen=True)
class MinimizerFamily:
    """All minimizers of a weight-based function, sorted by bitmask.

    `nontrivial` records whether the empty and full sets were excluded from
    the scan (they are never excluded from the function itself).
    """

    sets: tuple[Subset, ...]
    min_value: Fraction
    nontrivial: bool


def enumerate_minimizers(
    system: HyperedgeSystem, weights: WeightVector, nontrivial: bool = False
) -> MinimizerFamily:
    """Exhaustive scan of all (optionally non-trivial) subsets."""
    n = system.n
    if n > DIMENSION_SCAN_LIMIT:
        raise EnumerationLimitError(f"minimizer scan capped at n={DIMENSION_SCAN_LIMIT}")
    values, den = scaled_value_table(system, weights)
    full = (1 << n) - 1
    in_scope = [
        bits for bits in range(1 << n) if not (nontrivial and bits in (0, full))
    ]
    if not in_scope:
        raise ValueError("no subsets in scope (nontrivial scan over a singleton ground set)")
    best = min(values[bits] for bits in in_scope)
    sets = tuple(Subset(bits, n) for bits in in_scope if values[bits] == best)
    return MinimizerFamily(sets, Fraction(best, den), nontrivial)


def positive_weight_mask(weights: WeightVector) -> int:
    mask = 0
    for i, w in enumerate(weights):
        if w > 0:
            mask |= 1 << i
    return mask


def indicator_mask(system: HyperedgeSystem, weights: WeightVector, bits: int) -> int:
    """Active hyperedges with positive weight, as a bitmask over hyperedges."""
    return system.active_mask(bits) & positive_weight_mask(weights)


def indicator_vector(
    system: HyperedgeSystem, weights: WeightVector, subset: Subset
) -> tuple[int, ...]:
    """0/1 coordinates over hyperedges: active on `subset` and positive weight."""
    if subset.n != system.n:
        raise ValueError(f"subset over ground set {subset.n}, system expects {system.n}")
    mask = indicator_mask(system, weights, subset.bits)
    return tuple((mask >> i) & 1 for i in range(system.m))


def _vectors(
    system: HyperedgeSystem, weights: WeightVector, sets: tuple[Subset, ...]
) -> list[tuple[int, ...]]:
    wpos = positive_weight_mask(weights)
    out = []
    for subset in sets:
        mask = system.active_mask(subset.bits) & wpos
        out.append(tuple((mask >> i) & 1 for i in range(system.m)))
    return out


def cut_dimension(
    system: HyperedgeSystem, weights: WeightVector, nontrivial: bool = False
) -> tuple[int, list[Subset]]:
    """Rank of the minimizer indicator vectors, plus the greedy basis.

    The basis is chosen by Gaussian elimination over the minimizers in
    ascending bitmask order, so it is deterministic for a fixed system.
    """
    family = enumerate_minimizers(system, weights, nontrivial)
    vectors = _vectors(system, weights, family.sets)
    kept = linalg.greedy_independent(vectors)
    return len(kept), [family.sets[k] for k in kept]


@dataclass(frozen=True)
class BaseSets:
    """Per-element base sets of a minimizer family.

    per_element[i] is the intersection of all minimizers containing i (None
    when no minimizer contains i); include_empty records whether the empty
    set is itself a minimizer and therefore part of the collection.
    """

    per_element: dict[int, Subset | None]
    include_empty: bool

    def collection(self) -> tuple[Subset, ...]:
        """The distinct base sets, plus the empty set when flagged, sorted."""
        seen: dict[int, Subset] = {}
        for subset in self.per_element.values():
            if subset is not None:
                seen[subset.bits] = subset
        if self.include_empty:
            # per_element always carries one entry per ground element
            n = len(self.per_element)
            seen.setdefault(0, Subset.empty(n))
        return tuple(sorted(seen.values(), key=lambda s: s.bits))


def compute_base_sets(family: MinimizerFamily, n: int) -> BaseSets:
    """S_i = intersection of every minimizer containing element i."""
    per_element: dict[int, Subset | None] = {}
    for i in range(1, n + 1):
        bit = 1 << (i - 1)
        inter = None
        for subset in family.sets:
            if subset.bits & bit:
                inter = subset.bits if inter is None else inter & subset.bits
        per_element[i] = None if inter is None else Subset(inter, n)
    include_empty = any(s.bits == 0 for s in family.sets)
    return BaseSets(per_element, include_empty)


def verify_span_bound(
    system: HyperedgeSystem, weights: WeightVector, nontrivial: bool = False
) -> tuple[str, Subset] | None:
    """Check the chain of facts that bounds the trivial-allowed dimension by n+1.

    (a) "closure": the family is closed under union and intersection, and on
        every pair the vectors satisfy v(S|T) + v(S&T) = v(S) + v(T)
        coordinate-exactly (reported as "identity" when that part fails);
    (b) "union": every minimizer is the union of the base sets of its
        elements;
    (c) "span": every minimizer vector lies in the span of the base-set
        vectors (at most n+1 of them).

    Returns None on success, else (stage, first offending subset).  The
    facts hold for trivial-allowed families; passing nontrivial=True is
    supported precisely to demonstrate where they break.
    """
    n = system.n
    family = enumerate_minimizers(system, weights, nontrivial)
    wpos = positive_weight_mask(weights)
    member_bits = {s.bits for s in family.sets}
    ind = {s.bits: system.active_mask(s.bits) & wpos for s in family.sets}

    ordered = [s.bits for s in family.sets]
    for idx, a in enumerate(ordered):
        for b in ordered[idx:]:
            u = a | b
            w = a & b
            if u not in member_bits:
                return ("closure", Subset(u, n))
            if w not in member_bits:
                return ("closure", Subset(w, n))
            # 0/1 vector identity x+y = p+q <=> equal AND-masks and OR-masks.
            if (ind[u] & ind[w]) != (ind[a] & ind[b]) or (ind[u] | ind[w]) != (
                ind[a] | ind[b]
            ):
                return ("identity", Subset(u, n))

    base = compute_base_sets(family, n)
    for subset in family.sets:
        union = 0
        for i in subset.members():
            si = base.per_element[i]
            if si is not None:
                union |= si.bits
        if union != subset.bits:
            return ("union", subset)

    base_sets = base.collection()
    base_vectors = [
        tuple(((system.active_mask(s.bits) & wpos) >> i) & 1 for i in range(system.m))
        for s in base_sets
    ]
    elim = linalg._Eliminator()
    for vec in base_vectors:
        elim.insert(vec)
    for subset in family.sets:
        vec = tuple((ind[subset.bits] >> i) & 1 for i in range(system.m))
        if any(elim.reduce(vec)):
            return ("span", subset)
    return None


def expected_star_matching_dimension(n: int) -> int:
    """Non-trivial cut dimension of the star-plus-matching graph on n vertices."""
    if n < 3:
        raise ValueError("construction needs n >= 3")
    if n % 2 == 1:
        return 3 * (n - 1) // 2
    return 3 * n // 2 - 2
