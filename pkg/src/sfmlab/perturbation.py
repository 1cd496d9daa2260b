"""Perturbation analysis around a weight-based function.

compute_epsilon0 bounds how far the weights may move (multiplicatively per
coordinate) without any new subset becoming a minimizer, so inside that box
the minimizer family can only shrink.  find_witness then shows that any
query set of fewer vectors than the cut dimension leaves the minimum value
undetermined: it builds a perturbation, supported on the span of the
minimizer vectors and orthogonal to every queried vector, that moves the
minimum while reproducing every queried answer exactly.  A deterministic
basis of minimizers, in contrast, pins every minimizer's value, and
verify_equivalence exercises both directions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Sequence

from . import linalg
from .cut_dimension import enumerate_minimizers, positive_weight_mask
from .oracle import Subset
from .weight_based import HyperedgeSystem, WeightVector, scaled_value_table


class DegenerateFunctionError(ValueError):
    """The function is identically zero (all weights zero); no box exists."""


@dataclass(frozen=True)
class PerturbationBox:
    """Per-coordinate multiplicative slack around a weight vector.

    Any weights w' with |w'_i - w_i| <= epsilon0 * w_i for all i give a
    function whose minimizers are a subset of the original family.
    """

    weights: WeightVector
    epsilon0: Fraction


@dataclass(frozen=True)
class Witness:
    """A perturbation certifying that a query set does not pin the minimum.

    z is supported where the weights are positive, is orthogonal to every
    queried indicator vector (so all queried values survive exactly), and
    the perturbed weights stay inside the box while the minimum value moves
    to changed_min.
    """

    z: tuple[Fraction, ...]
    epsilon: Fraction
    perturbed: WeightVector
    changed_min: Fraction


@dataclass
class EquivalenceReport:
    """Outcome of verify_equivalence: witness trials plus the basis check."""

    passed: bool
    dimension: int
    trials: int
    failures: list[str]


def _value_gap(system: HyperedgeSystem, weights: WeightVector, nontrivial: bool) -> Fraction | None:
    """Second-smallest distinct in-scope value minus the smallest, or None."""
    values, den = scaled_value_table(system, weights)
    full = (1 << system.n) - 1
    in_scope = [
        v
        for bits, v in enumerate(values)
        if not (nontrivial and bits in (0, full))
    ]
    best = min(in_scope)
    second = None
    for v in in_scope:
        if v != best and (second is None or v < second):
            second = v
    if second is None:
        return None
    return Fraction(second - best, den)


def compute_epsilon0(
    system: HyperedgeSystem, weights: WeightVector, nontrivial: bool = False
) -> PerturbationBox:
    """Box radius min(1, gap / (4 * total weight)); 1/2 when every value ties.

    Inside the box each value moves by at most epsilon0 * total weight,
    which is at most a quarter of the gap, so no non-minimizer can catch up
    with any minimizer.
    """
    total = sum(weights, Fraction(0))
    if total == 0:
        raise DegenerateFunctionError("all weights are zero")
    gap = _value_gap(system, weights, nontrivial)
    if gap is None:
        epsilon0 = Fraction(1, 2)
    else:
        epsilon0 = min(Fraction(1), gap / (4 * total))
    return PerturbationBox(tuple(weights), epsilon0)


def determining_basis(
    system: HyperedgeSystem, weights: WeightVector, nontrivial: bool = False
) -> list[Subset]:
    """Minimizers whose vectors form the deterministic greedy basis.

    Querying exactly these sets pins the value of every minimizer for every
    weight vector in the box: each minimizer vector is a rational
    combination of the basis vectors, and the same combination transports
    the perturbed values.
    """
    from .cut_dimension import cut_dimension

    _, basis = cut_dimension(system, weights, nontrivial)
    return basis


@dataclass
class _Context:
    system: HyperedgeSystem
    weights: WeightVector
    nontrivial: bool
    family_sets: tuple[Subset, ...]
    min_value: Fraction
    vectors: list[tuple[int, ...]]
    basis_indices: list[int]
    box: PerturbationBox
    gap: Fraction | None


def _build_context(
    system: HyperedgeSystem, weights: WeightVector, nontrivial: bool
) -> _Context:
    family = enumerate_minimizers(system, weights, nontrivial)
    wpos = positive_weight_mask(weights)
    vectors = [
        tuple(((system.active_mask(s.bits) & wpos) >> i) & 1 for i in range(system.m))
        for s in family.sets
    ]
    basis_indices = linalg.greedy_independent(vectors)
    box = compute_epsilon0(system, weights, nontrivial)
    gap = _value_gap(system, weights, nontrivial)
    return _Context(
        system=system,
        weights=tuple(weights),
        nontrivial=nontrivial,
        family_sets=family.sets,
        min_value=family.min_value,
        vectors=vectors,
        basis_indices=basis_indices,
        box=box,
        gap=gap,
    )


def _query_vector(ctx: _Context, subset: Subset) -> tuple[int, ...]:
    if subset.n != ctx.system.n:
        raise ValueError(
            f"query over ground set of size {subset.n}, system expects {ctx.system.n}"
        )
    wpos = positive_weight_mask(ctx.weights)
    mask = ctx.system.active_mask(subset.bits) & wpos
    return tuple((mask >> i) & 1 for i in range(ctx.system.m))


def _min_value(
    system: HyperedgeSystem, weights: WeightVector, nontrivial: bool
) -> tuple[Fraction, set[int]]:
    """Exact in-scope minimum of the function given by `weights`, plus argmin bitmasks."""
    values, den = scaled_value_table(system, weights)
    full = (1 << system.n) - 1
    best = None
    arg: set[int] = set()
    for bits, v in enumerate(values):
        if nontrivial and bits in (0, full):
            continue
        if best is None or v < best:
            best = v
            arg = {bits}
        elif v == best:
            arg.add(bits)
    return Fraction(best, den), arg


def _find_witness(ctx: _Context, queries: Sequence[Subset]) -> Witness | None:
    d = len(ctx.basis_indices)
    if d == 0:
        return None
    basis_vectors = [ctx.vectors[k] for k in ctx.basis_indices]
    rows = []
    for q in queries:
        qvec = _query_vector(ctx, q)
        rows.append(
            tuple(Fraction(linalg.dot(qvec, bvec)) for bvec in basis_vectors)
        )
    null = linalg.nullspace(rows, d)
    if not null:
        return None
    beta = null[0]
    z = linalg.combine(beta, [tuple(map(Fraction, v)) for v in basis_vectors])
    target = None
    for subset, vec in zip(ctx.family_sets, ctx.vectors):
        val = linalg.dot(z, tuple(map(Fraction, vec)))
        if val:
            target = (subset, val)
            break
    if target is None:
        return None
    _, direction = target
    sign = Fraction(-1) if direction > 0 else Fraction(1)

    min_positive = min(w for w in ctx.weights if w > 0)
    max_abs_z = max(abs(c) for c in z)
    sum_abs_z = sum(abs(c) for c in z)
    gap_term = ctx.gap if ctx.gap is not None else Fraction(1, 2)
    epsilon = min(
        ctx.box.epsilon0 * min_positive / max_abs_z,
        gap_term / (2 * sum_abs_z),
    )
    perturbed = tuple(w + sign * epsilon * c for w, c in zip(ctx.weights, z))
    changed_min, _ = _min_value(ctx.system, perturbed, ctx.nontrivial)
    return Witness(z=z, epsilon=epsilon, perturbed=perturbed, changed_min=changed_min)


def find_witness(
    system: HyperedgeSystem,
    weights: WeightVector,
    nontrivial: bool,
    queries: Sequence[Subset],
) -> Witness | None:
    """Perturbation witness against a query set, or None when none exists.

    A witness always exists when fewer than d linearly independent query
    vectors were supplied (d the cut dimension); None is the legitimate
    outcome for determining query sets.
    """
    ctx = _build_context(system, weights, nontrivial)
    return _find_witness(ctx, queries)


def _validate(ctx: _Context, queries: Sequence[Subset], witness: Witness) -> list[str]:
    problems: list[str] = []
    if not any(witness.z):
        problems.append("z is the zero vector")
    for i, (w, c) in enumerate(zip(ctx.weights, witness.z)):
        if w == 0 and c != 0:
            problems.append(f"z touches zero-weight coordinate {i}")
    eps0 = ctx.box.epsilon0
    for i, (w, wp) in enumerate(zip(ctx.weights, witness.perturbed)):
        if wp < 0:
            problems.append(f"perturbed weight {i} negative")
        if abs(wp - w) > eps0 * w:
            problems.append(f"perturbed weight {i} escapes the box")
    for q in queries:
        before = Fraction(0)
        after = Fraction(0)
        for idx in ctx.system.active_indices(q.bits):
            before += ctx.weights[idx]
            after += witness.perturbed[idx]
        if before != after:
            problems.append(f"queried value changed on bitmask {q.bits}")
    new_min, new_arg = _min_value(ctx.system, witness.perturbed, ctx.nontrivial)
    if new_min != witness.changed_min:
        problems.append("recorded changed_min disagrees with a fresh scan")
    if new_min == ctx.min_value:
        problems.append("perturbation did not move the minimum value")
    family_bits = {s.bits for s in ctx.family_sets}
    if not new_arg <= family_bits:
        problems.append("perturbed minimizers escape the original family")
    return problems


def validate_witness(
    system: HyperedgeSystem,
    weights: WeightVector,
    nontrivial: bool,
    queries: Sequence[Subset],
    witness: Witness,
) -> list[str]:
    """Independent re-check of every witness guarantee; empty list means valid."""
    ctx = _build_context(system, weights, nontrivial)
    return _validate(ctx, queries, witness)


def verify_equivalence(
    system: HyperedgeSystem,
    weights: WeightVector,
    nontrivial: bool,
    trials: int,
    seed: int = 0,
) -> EquivalenceReport:
    """Both directions of the query-count argument, empirically.

    (a) For `trials` random (d-1)-subset query sets (drawn from all
    subsets, per-trial rng seeded seed + index) a valid witness must exist;
    (b) on the deterministic determining basis no witness may exist.
    """
    ctx = _build_context(system, weights, nontrivial)
    d = len(ctx.basis_indices)
    n = system.n
    failures: list[str] = []
    population = list(range(1 << n))
    for trial in range(trials):
        rng = Random(seed + trial)
        take = max(d - 1, 0)
        qbits = rng.sample(population, take) if take else []
        queries = [Subset(bits, n) for bits in qbits]
        witness = _find_witness(ctx, queries)
        if witness is None:
            failures.append(f"trial {trial}: no witness for query bitmasks {sorted(qbits)}")
            continue
        problems = _validate(ctx, queries, witness)
        for p in problems:
            failures.append(f"trial {trial}: {p}")
    basis_sets = [ctx.family_sets[k] for k in ctx.basis_indices]
    if _find_witness(ctx, basis_sets) is not None:
        failures.append("determining basis still admits a witness")
    return EquivalenceReport(
        passed=not failures, dimension=d, trials=trials, failures=failures
    )
