"""Exact-arithmetic laboratory for query-complexity experiments on
submodular function minimization: value oracles with transcripts, hard
instance families and their adversaries, weight-based functions and cut
systems, minimizer-space dimension and perturbation analysis, reference
solvers, and cut-query graph learning."""

from .cut_dimension import (
    BaseSets,
    MinimizerFamily,
    compute_base_sets,
    cut_dimension,
    enumerate_minimizers,
    expected_star_matching_dimension,
    indicator_vector,
    verify_span_bound,
)
from .graph_learning import (
    CycleEquivalenceCertificate,
    CycleShift,
    NotACutFunctionError,
    StKernelVector,
    apply_cycle_shift,
    cut_equivalent,
    edge_weight_map,
    find_shiftable_cycle,
    learn_directed_up_to_cycles,
    learn_undirected,
    st_cut_value,
    st_indistinguishability_pair,
    st_kernel_vector,
    st_query_coefficients,
    star_st_graph,
)
from .hard_instances import (
    CostBasedInstance,
    InconsistentOracleError,
    PairFamily,
    PermutationAdversary,
    PermutationInstance,
    adversary_pairs,
    apply_marks,
    eval_cost_based,
    eval_permutation_family,
    make_pair_family,
    permutation_base_table,
    solve_permutation_family,
)
from .oracle import (
    EnumerationLimitError,
    GroundSetMismatchError,
    QueryTranscript,
    SetFunction,
    Subset,
    ValueOracle,
    check_diminishing_returns,
    check_submodular,
    check_submodular_ints,
    check_symmetric,
    fraction_to_str,
    iter_subsets,
    replay_matches,
    str_to_fraction,
    value_table,
)
from .perturbation import (
    DegenerateFunctionError,
    EquivalenceReport,
    PerturbationBox,
    Witness,
    compute_epsilon0,
    determining_basis,
    find_witness,
    validate_witness,
    verify_equivalence,
)
from .solvers import (
    AsymmetricFunctionError,
    SolverResult,
    brute_force_sfm,
    nontrivial_via_reduction,
    queyranne_minimize,
)
from .weight_based import (
    HyperedgeSystem,
    WeightedGraph,
    build_star_matching_graph,
    check_weight_based_condition,
    cut_system_from_graph,
    cut_value_function,
    eval_weight_based,
    graph_from_json,
    graph_to_json,
    load_graph,
    random_weighted_graph,
    scaled_value_table,
    value_function,
)

__version__ = "0.1.0"

__all__ = [
    "AsymmetricFunctionError",
    "BaseSets",
    "CostBasedInstance",
    "CycleEquivalenceCertificate",
    "CycleShift",
    "DegenerateFunctionError",
    "EnumerationLimitError",
    "EquivalenceReport",
    "GroundSetMismatchError",
    "HyperedgeSystem",
    "InconsistentOracleError",
    "MinimizerFamily",
    "NotACutFunctionError",
    "PairFamily",
    "PermutationAdversary",
    "PermutationInstance",
    "PerturbationBox",
    "QueryTranscript",
    "SetFunction",
    "SolverResult",
    "StKernelVector",
    "Subset",
    "ValueOracle",
    "WeightedGraph",
    "Witness",
    "adversary_pairs",
    "apply_cycle_shift",
    "apply_marks",
    "brute_force_sfm",
    "build_star_matching_graph",
    "check_diminishing_returns",
    "check_submodular",
    "check_submodular_ints",
    "check_symmetric",
    "check_weight_based_condition",
    "compute_base_sets",
    "compute_epsilon0",
    "cut_dimension",
    "cut_equivalent",
    "cut_system_from_graph",
    "cut_value_function",
    "determining_basis",
    "edge_weight_map",
    "enumerate_minimizers",
    "eval_cost_based",
    "eval_permutation_family",
    "eval_weight_based",
    "expected_star_matching_dimension",
    "find_shiftable_cycle",
    "find_witness",
    "fraction_to_str",
    "graph_from_json",
    "graph_to_json",
    "indicator_vector",
    "iter_subsets",
    "learn_directed_up_to_cycles",
    "learn_undirected",
    "load_graph",
    "make_pair_family",
    "nontrivial_via_reduction",
    "permutation_base_table",
    "queyranne_minimize",
    "random_weighted_graph",
    "replay_matches",
    "scaled_value_table",
    "solve_permutation_family",
    "st_cut_value",
    "st_indistinguishability_pair",
    "st_kernel_vector",
    "st_query_coefficients",
    "star_st_graph",
    "str_to_fraction",
    "validate_witness",
    "value_function",
    "value_table",
    "verify_equivalence",
    "verify_span_bound",
]
