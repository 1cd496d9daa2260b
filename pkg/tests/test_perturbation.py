from fractions import Fraction
from random import Random

import pytest

from sfmlab import (
    DegenerateFunctionError,
    HyperedgeSystem,
    Subset,
    build_star_matching_graph,
    compute_epsilon0,
    cut_dimension,
    cut_system_from_graph,
    determining_basis,
    enumerate_minimizers,
    eval_weight_based,
    find_witness,
    indicator_vector,
    validate_witness,
    verify_equivalence,
)
from sfmlab.linalg import dot, express_in_basis, nullspace, rank

from common import parallel_paths, triangle

F = Fraction


def tri():
    return cut_system_from_graph(triangle())


def test_epsilon0_frozen_values():
    system, weights = tri()
    # all six nontrivial cuts are minimum: no gap, fallback branch
    assert compute_epsilon0(system, weights, True).epsilon0 == F(1, 2)
    s5, w5 = cut_system_from_graph(build_star_matching_graph(5))
    # min 2, next value 4, total weight 6
    assert compute_epsilon0(s5, w5, True).epsilon0 == F(1, 12)
    pp_sys, pp_w = cut_system_from_graph(parallel_paths())
    assert compute_epsilon0(pp_sys, pp_w, False).epsilon0 == F(1, 2)


def test_epsilon0_box_keeps_minimizers_inside_family():
    system, weights = cut_system_from_graph(build_star_matching_graph(5))
    box = compute_epsilon0(system, weights, True)
    fam = enumerate_minimizers(system, weights, True)
    member_bits = {s.bits for s in fam.sets}
    rng = Random(11)
    for _ in range(20):
        scale = [F(rng.randint(-100, 100), 100) * box.epsilon0 for _ in weights]
        perturbed = tuple(w * (1 + sc) for w, sc in zip(weights, scale))
        new_fam = enumerate_minimizers(system, perturbed, True)
        assert {s.bits for s in new_fam.sets} <= member_bits


def test_epsilon0_degenerate_weights():
    system, weights = tri()
    with pytest.raises(DegenerateFunctionError):
        compute_epsilon0(system, (F(0),) * len(weights), True)


def test_triangle_witness_frozen():
    system, weights = tri()
    queries = [Subset.of(3, 2), Subset.of(3, 3)]
    wit = find_witness(system, weights, True, queries)
    assert wit is not None
    assert wit.z == (F(-2), F(-2), F(2))
    assert wit.epsilon == F(1, 24)
    assert wit.perturbed == (F(11, 12), F(11, 12), F(13, 12))
    assert wit.changed_min == F(11, 6)
    assert validate_witness(system, weights, True, queries, wit) == []


def test_witness_perturbed_function_checks_out_by_hand():
    system, weights = tri()
    queries = [Subset.of(3, 2), Subset.of(3, 3)]
    wit = find_witness(system, weights, True, queries)
    for q in queries:
        assert eval_weight_based(system, wit.perturbed, q) == eval_weight_based(
            system, weights, q
        )
    nontrivial = [Subset(b, 3) for b in range(1, 7)]
    assert min(eval_weight_based(system, wit.perturbed, s) for s in nontrivial) == F(11, 6)


def test_witness_none_on_determining_basis():
    system, weights = tri()
    basis = determining_basis(system, weights, True)
    assert len(basis) == 3
    assert find_witness(system, weights, True, basis) is None


def test_witness_zero_stays_zero_on_dead_edges():
    # zero-weight edge: box pins it, so z must vanish there
    g = triangle()
    edges = list(g.edges) + [(1, 2, F(0))]
    g2 = type(g)(3, tuple(edges), "undirected")
    system, weights = cut_system_from_graph(g2)
    wit = find_witness(system, weights, True, [Subset.of(3, 2)])
    assert wit is not None
    assert wit.z[3] == 0
    assert validate_witness(system, weights, True, [Subset.of(3, 2)], wit) == []


def test_gram_matrix_nonsingular_on_basis():
    for n in (3, 5, 6):
        system, weights = cut_system_from_graph(build_star_matching_graph(n))
        d, basis = cut_dimension(system, weights, True)
        vectors = [indicator_vector(system, weights, s) for s in basis]
        gram = [tuple(dot(u, v) for v in vectors) for u in vectors]
        assert rank(gram) == d


def test_dimension_counts_for_query_nullspace():
    system, weights = cut_system_from_graph(build_star_matching_graph(5))
    d, _ = cut_dimension(system, weights, True)
    m = system.m
    fam = enumerate_minimizers(system, weights, True)
    y_rank = rank([indicator_vector(system, weights, s) for s in fam.sets])
    rng = Random(5)
    for _ in range(20):
        query_bits = rng.sample(range(1 << 5), d - 1)
        q_vecs = [indicator_vector(system, weights, Subset(b, 5)) for b in query_bits]
        x_dim = len(nullspace(q_vecs, m))
        assert x_dim >= m - len(q_vecs)
        assert x_dim + y_rank > m  # forces a nonzero witness direction


def test_determining_basis_reproduces_box_values():
    system, weights = cut_system_from_graph(build_star_matching_graph(5))
    box = compute_epsilon0(system, weights, True)
    basis = determining_basis(system, weights, True)
    basis_vectors = [indicator_vector(system, weights, s) for s in basis]
    fam = enumerate_minimizers(system, weights, True)
    rng = Random(17)
    for _ in range(20):
        perturbed = tuple(
            w * (1 + F(rng.randint(-100, 100), 100) * box.epsilon0) for w in weights
        )
        for s in fam.sets:
            coeffs = express_in_basis(
                indicator_vector(system, weights, s), basis_vectors
            )
            assert coeffs is not None
            predicted = sum(
                (c * eval_weight_based(system, perturbed, b) for c, b in zip(coeffs, basis)),
                F(0),
            )
            assert predicted == eval_weight_based(system, perturbed, s)


def test_witness_ground_set_mismatch():
    system, weights = tri()
    with pytest.raises(ValueError):
        find_witness(system, weights, True, [Subset(1, 4)])


def test_verify_equivalence_triangle():
    system, weights = tri()
    report = verify_equivalence(system, weights, True, 50, seed=0)
    assert report.passed
    assert report.dimension == 3
    assert report.trials == 50
    assert report.failures == []


def test_verify_equivalence_deterministic():
    system, weights = cut_system_from_graph(build_star_matching_graph(4))
    a = verify_equivalence(system, weights, True, 25, seed=9)
    b = verify_equivalence(system, weights, True, 25, seed=9)
    assert (a.passed, a.dimension, a.failures) == (b.passed, b.dimension, b.failures)
