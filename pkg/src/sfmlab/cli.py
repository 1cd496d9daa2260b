"""Command-line front end: desk-scale experiments with machine-readable reports.

Every subcommand prints one JSON (or CSV) report and exits 0 when its
"pass" field is true, 1 when a checked property failed, and 2 on usage or
guard errors.  All randomness is derived from --seed (per-trial seeds are
seed + trial index), and reports carry no timestamps, so identical flags
give byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from random import Random
from typing import Callable

from .cut_dimension import cut_dimension, expected_star_matching_dimension, verify_span_bound
from .graph_learning import (
    edge_weight_map,
    learn_directed_up_to_cycles,
    learn_undirected,
    st_indistinguishability_pair,
    st_kernel_vector,
    st_query_coefficients,
)
from .hard_instances import (
    CostBasedInstance,
    PermutationAdversary,
    PermutationInstance,
    adversary_pairs,
    make_pair_family,
    solve_permutation_family,
)
from .oracle import (
    SUBMODULARITY_SCAN_LIMIT,
    SetFunction,
    Subset,
    ValueOracle,
    check_submodular,
    fraction_to_str,
    replay_matches,
)
from .perturbation import compute_epsilon0, find_witness, verify_equivalence
from .solvers import brute_force_sfm, nontrivial_via_reduction, queyranne_minimize
from .weight_based import (
    WeightedGraph,
    build_star_matching_graph,
    cut_system_from_graph,
    cut_value_function,
    graph_to_json,
    load_graph,
    random_weighted_graph,
)

BRUTE_CROSS_CHECK_LIMIT = 16


def _random_permutation_instance(rng: Random, n: int) -> PermutationInstance:
    sigma = list(range(1, n + 1))
    rng.shuffle(sigma)
    marks = [rng.randint(0, 1) for _ in range(n + 1)]
    return PermutationInstance(n, sigma, marks)


def _load_instance(path: str) -> tuple[SetFunction, int, dict]:
    """Set function, ground size, and echo JSON from an instance file."""
    with open(path, encoding="utf-8") as handle:
        data = json.load(handle)
    if not isinstance(data, dict):
        raise ValueError("instance file must hold a JSON object")
    kind = data.get("kind")
    if kind == "permutation":
        inst = PermutationInstance.from_json(data)
        return inst.value, inst.n, inst.to_json()
    if kind == "cost_based":
        cost_inst = CostBasedInstance.from_json(data)
        return cost_inst.value, cost_inst.n, cost_inst.to_json()
    if "mode" in data:
        g = load_graph(path)
        return cut_value_function(g), g.ground_size(), graph_to_json(g)
    raise ValueError(f"unrecognized instance kind {kind!r}")


def _graph_source(args) -> tuple[WeightedGraph, str]:
    """Graph named by --instance or --construction star-matching --n."""
    if getattr(args, "instance", None):
        return load_graph(args.instance), args.instance
    if getattr(args, "construction", None) == "star-matching":
        if args.n is None:
            raise ValueError("--construction star-matching requires --n")
        return build_star_matching_graph(args.n), f"star-matching n={args.n}"
    raise ValueError("provide --instance <path> or --construction star-matching --n <n>")


def _subset_members(subset: Subset) -> list[int]:
    return list(subset.members())


def _cmd_check_submodular(args) -> dict:
    report = {"command": "check-submodular"}
    checked = 0
    violation = None
    if args.instance:
        fn, n, echo = _load_instance(args.instance)
        if n > SUBMODULARITY_SCAN_LIMIT:
            raise ValueError(f"scan guard: n={n} exceeds {SUBMODULARITY_SCAN_LIMIT}")
        bad = check_submodular(fn, n)
        checked = 1
        if bad is not None:
            violation = {"instance": echo, "x": _subset_members(bad[0]), "y": _subset_members(bad[1])}
        report.update({"source": args.instance, "n": n})
    else:
        if args.n is None:
            raise ValueError("--n is required without --instance")
        n = args.n
        if n > SUBMODULARITY_SCAN_LIMIT:
            raise ValueError(f"scan guard: n={n} exceeds {SUBMODULARITY_SCAN_LIMIT}")
        report.update({"source": args.construction, "n": n})
        if args.construction == "permutation":
            for trial in range(args.trials):
                inst = _random_permutation_instance(Random(args.seed + trial), n)
                bad = check_submodular(inst.value, n)
                checked += 1
                if bad is not None:
                    violation = {
                        "instance": inst.to_json(),
                        "x": _subset_members(bad[0]),
                        "y": _subset_members(bad[1]),
                    }
                    break
            report["seed"] = args.seed
            report["trials"] = args.trials
        elif args.construction == "pair-family":
            family = make_pair_family(n)
            members = [((), family.base)] + [
                (pair, inst) for pair, inst in sorted(family.variants.items())
            ]
            for pair, inst in members:
                bad = check_submodular(inst.value, n)
                checked += 1
                if bad is not None:
                    violation = {
                        "instance": inst.to_json(),
                        "variant": list(pair),
                        "x": _subset_members(bad[0]),
                        "y": _subset_members(bad[1]),
                    }
                    break
        elif args.construction == "star-matching":
            graph = build_star_matching_graph(n)
            bad = check_submodular(cut_value_function(graph), n)
            checked = 1
            if bad is not None:
                violation = {"x": _subset_members(bad[0]), "y": _subset_members(bad[1])}
        else:
            raise ValueError("--construction must be permutation, pair-family, or star-matching")
    report["checked"] = checked
    report["violation"] = violation
    report["pass"] = violation is None
    return report


def _cmd_adversary_2n(args) -> dict:
    n = args.n
    if n is None:
        raise ValueError("--n is required")
    adversary = PermutationAdversary(n)
    important_decoy_bound = True

    def answer(subset: Subset) -> Fraction:
        nonlocal important_decoy_bound
        value, _ = adversary.answer(subset)
        if adversary.distinct_important_count > adversary.decoy_count + 2:
            important_decoy_bound = False
        return value

    oracle = ValueOracle(answer, n)
    if args.budget is not None:
        seen = []
        for bits in range(min(args.budget, 1 << n)):
            seen.append(oracle.evaluate(Subset(bits, n)))
        guess = min(seen) if seen else Fraction(0)
        solver_name = f"budget-{args.budget}"
    elif args.solver == "brute":
        result = brute_force_sfm(oracle)
        guess = result.min_value
        solver_name = "brute"
    else:
        result = solve_permutation_family(oracle)
        guess = result.min_value
        solver_name = "2n"
    queries_used = oracle.counter
    instance, fooled = adversary.finalize(guess)
    replay_ok = replay_matches(oracle.transcript, instance.value)
    expected_fooled = args.budget is not None and args.budget < 2 * n
    expected_correct = args.budget is None
    verdict_ok = True
    if expected_fooled:
        verdict_ok = fooled
    elif expected_correct:
        verdict_ok = not fooled
    report = {
        "command": "adversary-2n",
        "n": n,
        "solver": solver_name,
        "budget": args.budget,
        "queries_used": queries_used,
        "guess": fraction_to_str(guess),
        "true_min": fraction_to_str(instance.minimum()),
        "verdict": "fooled" if fooled else "correct",
        "distinct_important": adversary.distinct_important_count,
        "decoy_count": adversary.decoy_count,
        "replay_consistent": replay_ok,
        "important_decoy_bound": important_decoy_bound,
        "instance": instance.to_json(),
        "pass": replay_ok and important_decoy_bound and verdict_ok,
    }
    return report


def _cmd_adversary_pairs(args) -> dict:
    n = args.n
    if n is None:
        raise ValueError("--n is required")
    if n < 3:
        raise ValueError("pair family needs n >= 3")
    family = make_pair_family(n)
    co_pairs = [
        (i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)
    ]
    budget = len(co_pairs) if args.budget is None else args.budget
    oracle = ValueOracle(family.base.value, n)
    for i, j in co_pairs[:budget]:
        oracle.evaluate(Subset(family.co_pair_bits(i, j), n))
    guess = Fraction(0)
    instance = adversary_pairs(oracle.transcript, guess, n)
    fooled = instance is not None
    if instance is not None:
        true_min = brute_force_sfm(
            ValueOracle(instance.value, n), nontrivial=True
        ).min_value
    else:
        true_min = brute_force_sfm(
            ValueOracle(family.base.value, n), nontrivial=True
        ).min_value
    expected_fooled = budget < len(co_pairs)
    report = {
        "command": "adversary-pairs",
        "n": n,
        "budget": budget,
        "total_co_pairs": len(co_pairs),
        "queries_used": oracle.counter,
        "guess": fraction_to_str(guess),
        "fooled": fooled,
        "true_min": fraction_to_str(true_min),
        "instance": instance.to_json() if instance is not None else None,
        "pass": fooled == expected_fooled and (fooled or true_min == guess),
    }
    return report


def _cmd_solve(args) -> dict:
    if args.instance:
        fn, n, _echo = _load_instance(args.instance)
        source = args.instance
    elif args.construction == "star-matching":
        if args.n is None:
            raise ValueError("--construction star-matching requires --n")
        graph = build_star_matching_graph(args.n)
        fn, n, source = cut_value_function(graph), args.n, f"star-matching n={args.n}"
    elif args.construction == "permutation":
        if args.n is None:
            raise ValueError("--construction permutation requires --n")
        inst = _random_permutation_instance(Random(args.seed), args.n)
        fn, n, source = inst.value, args.n, f"permutation n={args.n} seed={args.seed}"
    elif args.construction == "pair-family":
        if args.n is None:
            raise ValueError("--construction pair-family requires --n")
        inst = make_pair_family(args.n).base
        fn, n, source = inst.value, args.n, f"pair-family base n={args.n}"
    else:
        raise ValueError("provide --instance or --construction")
    oracle = ValueOracle(fn, n)
    if args.solver == "brute":
        result = brute_force_sfm(oracle, nontrivial=args.nontrivial)
        scope_nontrivial = args.nontrivial
    elif args.solver == "reduction":
        result = nontrivial_via_reduction(oracle)
        scope_nontrivial = True
    else:
        result = queyranne_minimize(oracle, verify_symmetry=True)
        scope_nontrivial = True
    agrees = None
    if n <= BRUTE_CROSS_CHECK_LIMIT:
        truth = brute_force_sfm(ValueOracle(fn, n), nontrivial=scope_nontrivial)
        agrees = truth.min_value == result.min_value
    report = {
        "command": "solve",
        "solver": args.solver,
        "source": source,
        "n": n,
        "nontrivial": scope_nontrivial,
        "min": fraction_to_str(result.min_value),
        "argmin": _subset_members(result.argmin),
        "queries_used": result.queries_used,
        "agrees_with_brute": agrees,
        "pass": agrees is not False,
    }
    return report


def _cmd_cutdim(args) -> dict:
    graph, source = _graph_source(args)
    # The star-matching family is symmetric, so its meaningful minimizers
    # are the nontrivial ones; other instances follow the flag.
    nontrivial = args.nontrivial or (
        getattr(args, "construction", None) == "star-matching"
    )
    system, weights = cut_system_from_graph(graph)
    d, basis = cut_dimension(system, weights, nontrivial)
    report = {
        "command": "cutdim",
        "source": source,
        "n": system.n,
        "nontrivial": nontrivial,
        "d": d,
        "basis": [_subset_members(s) for s in basis],
    }
    if getattr(args, "construction", None) == "star-matching":
        expected = expected_star_matching_dimension(args.n)
        report["expected"] = expected
        report["pass"] = d == expected
    else:
        report["bound"] = system.n + 1
        report["pass"] = d <= system.n + 1
    return report


def _cmd_perturb(args) -> dict:
    graph, source = _graph_source(args)
    nontrivial = args.nontrivial or (
        getattr(args, "construction", None) == "star-matching"
    )
    system, weights = cut_system_from_graph(graph)
    box = compute_epsilon0(system, weights, nontrivial)
    outcome = verify_equivalence(system, weights, nontrivial, args.trials, seed=args.seed)
    rng = Random(args.seed)
    sample_bits = (
        rng.sample(range(1 << system.n), outcome.dimension - 1)
        if outcome.dimension > 1
        else []
    )
    witness = find_witness(
        system, weights, nontrivial, [Subset(b, system.n) for b in sample_bits]
    )
    report = {
        "command": "perturb",
        "source": source,
        "n": system.n,
        "nontrivial": nontrivial,
        "epsilon0": fraction_to_str(box.epsilon0),
        "d": outcome.dimension,
        "trials": outcome.trials,
        "failures": outcome.failures,
        "sample_queries": sorted(sample_bits),
        "witness": None,
        "pass": outcome.passed,
    }
    if witness is not None:
        report["witness"] = {
            "z": [fraction_to_str(x) for x in witness.z],
            "epsilon": fraction_to_str(witness.epsilon),
            "perturbed": [fraction_to_str(x) for x in witness.perturbed],
            "changed_min": fraction_to_str(witness.changed_min),
        }
    return report


def _cmd_span_bound(args) -> dict:
    if args.n is None:
        raise ValueError("--n is required")
    rows = []
    ok = True
    for trial in range(args.trials):
        rng = Random(args.seed + trial)
        graph = random_weighted_graph(rng, args.n, args.mode)
        system, weights = cut_system_from_graph(graph)
        d, _ = cut_dimension(system, weights, args.nontrivial)
        failure = verify_span_bound(system, weights, args.nontrivial)
        bound = system.n + 1
        row_ok = failure is None and d <= bound
        ok = ok and row_ok
        rows.append(
            {
                "trial": trial,
                "d": d,
                "bound": bound,
                "span_ok": failure is None,
                "ok": row_ok,
            }
        )
    return {
        "command": "span-bound",
        "mode": args.mode,
        "n": args.n,
        "seed": args.seed,
        "trials": args.trials,
        "rows": rows,
        "pass": ok,
    }


def _cmd_learn_graph(args) -> dict:
    if args.mode == "st":
        raise ValueError(
            "two-terminal cut functions are not learnable; see the st-kernel subcommand"
        )
    rows = []
    ok = True
    if args.instance:
        graphs = [(0, load_graph(args.instance))]
        source = args.instance
    else:
        if args.n is None:
            raise ValueError("--n is required without --instance")
        graphs = [
            (trial, random_weighted_graph(Random(args.seed + trial), args.n, args.mode))
            for trial in range(args.trials)
        ]
        source = f"random mode={args.mode} n={args.n} seed={args.seed}"
    for trial, graph in graphs:
        if graph.mode != args.mode:
            raise ValueError(f"instance mode {graph.mode!r} does not match --mode {args.mode!r}")
        n = graph.ground_size()
        oracle = ValueOracle(cut_value_function(graph), n)
        if args.mode == "undirected":
            learned = learn_undirected(oracle)
            exact = edge_weight_map(learned) == edge_weight_map(graph)
            expected_queries = n + n * (n - 1) // 2
            row_ok = exact and oracle.counter == expected_queries
            rows.append(
                {
                    "trial": trial,
                    "exact": exact,
                    "queries_used": oracle.counter,
                    "expected_queries": expected_queries,
                    "ok": row_ok,
                }
            )
        else:
            certificate = learn_directed_up_to_cycles(oracle)
            row_ok = certificate.agrees_on_all_cuts is True
            residual = certificate.residual
            rows.append(
                {
                    "trial": trial,
                    "agrees_on_all_cuts": certificate.agrees_on_all_cuts,
                    "residual_cycle": list(residual.cycle) if residual else None,
                    "max_shift": fraction_to_str(residual.max_shift) if residual else None,
                    "ok": row_ok,
                }
            )
        ok = ok and row_ok
    return {
        "command": "learn-graph",
        "mode": args.mode,
        "source": source,
        "rows": rows,
        "pass": ok,
    }


def _cmd_st_kernel(args) -> dict:
    k = args.k
    if k is None:
        raise ValueError("--k is required")
    if k > 12:
        raise ValueError("exhaustive scan guard: k <= 12")
    kernel = st_kernel_vector(k, 1)
    if kernel is None:
        return {
            "command": "st-kernel",
            "k": k,
            "kernel": None,
            "determinable": True,
            "pass": True,
        }
    products = []
    all_zero = True
    for bits in range(1 << k):
        coefficients = st_query_coefficients(bits, k)
        total = sum(
            (b * c for b, c in zip(kernel.beta, coefficients)), Fraction(0)
        )
        all_zero = all_zero and total == 0
        products.append(fraction_to_str(total))
    first, second = st_indistinguishability_pair(k, 1)
    queries_agree = all(
        sum((w * c for w, c in zip(first, st_query_coefficients(bits, k))), Fraction(0))
        == sum((w * c for w, c in zip(second, st_query_coefficients(bits, k))), Fraction(0))
        for bits in range(1 << k)
    )
    weights_differ = first[0] != second[0]
    return {
        "command": "st-kernel",
        "k": k,
        "special_vertex": kernel.special_vertex,
        "beta": [fraction_to_str(b) for b in kernel.beta],
        "off_diagonal": fraction_to_str(Fraction(-1, k - 1)),
        "off_diagonal_note": (
            "off-diagonal entries are -1/(k-1); the uniform -1/k alternative "
            "fails this orthogonality scan"
        ),
        "inner_products": products,
        "indistinguishable_pair": {
            "w1": [fraction_to_str(w) for w in first],
            "w2": [fraction_to_str(w) for w in second],
            "queries_agree": queries_agree,
            "weights_differ_at_special_vertex": weights_differ,
        },
        "determinable": False,
        "pass": all_zero and queries_agree and weights_differ,
    }


def _cmd_search_cutdim(args) -> dict:
    if args.n is None:
        raise ValueError("--n is required")
    best_d = -1
    best_graph = None
    rows = []
    for trial in range(args.trials):
        rng = Random(args.seed + trial)
        graph = random_weighted_graph(
            rng, args.n, args.mode, connected=args.mode == "undirected"
        )
        system, weights = cut_system_from_graph(graph)
        d, _ = cut_dimension(system, weights, args.nontrivial)
        rows.append({"trial": trial, "d": d})
        if d > best_d:
            best_d = d
            best_graph = graph
    report = {
        "command": "search-cutdim",
        "mode": args.mode,
        "n": args.n,
        "nontrivial": args.nontrivial,
        "seed": args.seed,
        "trials": args.trials,
        "best_d": best_d,
        "best_graph": graph_to_json(best_graph) if best_graph is not None else None,
        "rows": rows,
        "pass": True,
    }
    if args.mode == "undirected" and args.nontrivial and args.n >= 3:
        report["star_matching_benchmark"] = expected_star_matching_dimension(args.n)
    return report


_HANDLERS: dict[str, Callable] = {
    "check-submodular": _cmd_check_submodular,
    "adversary-2n": _cmd_adversary_2n,
    "adversary-pairs": _cmd_adversary_pairs,
    "solve": _cmd_solve,
    "cutdim": _cmd_cutdim,
    "perturb": _cmd_perturb,
    "span-bound": _cmd_span_bound,
    "learn-graph": _cmd_learn_graph,
    "st-kernel": _cmd_st_kernel,
    "search-cutdim": _cmd_search_cutdim,
}


def _add_common(sub: argparse.ArgumentParser, *names: str) -> None:
    if "n" in names:
        sub.add_argument("--n", type=int, default=None, help="ground-set / vertex count")
    if "k" in names:
        sub.add_argument("--k", type=int, default=None, help="non-terminal vertex count")
    if "seed" in names:
        sub.add_argument("--seed", type=int, default=0, help="base seed; trial t uses seed+t")
    if "trials" in names:
        sub.add_argument("--trials", type=int, default=20, help="number of random trials")
    if "mode" in names:
        sub.add_argument(
            "--mode",
            choices=("undirected", "directed", "st"),
            default="undirected",
            help="cut-system mode",
        )
    if "nontrivial" in names:
        sub.add_argument(
            "--nontrivial",
            action="store_true",
            help="restrict minimizers to sets other than empty/full",
        )
    if "construction" in names:
        sub.add_argument(
            "--construction",
            choices=("star-matching", "pair-family", "permutation"),
            default=None,
            help="built-in instance family",
        )
    if "instance" in names:
        sub.add_argument("--instance", default=None, help="instance JSON file")
    sub.add_argument("--format", choices=("json", "csv"), default="json")
    sub.add_argument("--out", default=None, help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sfmlab",
        description="exact experiments on submodular minimization query complexity",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("check-submodular", help="exhaustive submodularity scan")
    _add_common(sub, "n", "seed", "trials", "construction", "instance")

    sub = commands.add_parser("adversary-2n", help="play a solver against the 2n adversary")
    sub.add_argument("--solver", choices=("brute", "2n"), default="2n")
    sub.add_argument("--budget", type=int, default=None, help="cap a naive scanner at this many queries")
    _add_common(sub, "n")

    sub = commands.add_parser("adversary-pairs", help="play the co-pair counting adversary")
    sub.add_argument("--budget", type=int, default=None, help="co-pair queries made before guessing")
    _add_common(sub, "n")

    sub = commands.add_parser("solve", help="run a reference solver with query accounting")
    sub.add_argument("--solver", choices=("brute", "reduction", "queyranne"), required=True)
    _add_common(sub, "n", "seed", "nontrivial", "construction", "instance")

    sub = commands.add_parser("cutdim", help="minimizer indicator rank of a cut system")
    _add_common(sub, "n", "nontrivial", "construction", "instance")

    sub = commands.add_parser("perturb", help="witness search and equivalence trials")
    _add_common(sub, "n", "seed", "trials", "nontrivial", "construction", "instance")

    sub = commands.add_parser("span-bound", help="base-set span check on random instances")
    _add_common(sub, "n", "seed", "trials", "mode", "nontrivial")

    sub = commands.add_parser("learn-graph", help="reconstruct graphs from cut queries")
    _add_common(sub, "n", "seed", "trials", "mode", "instance")

    sub = commands.add_parser("st-kernel", help="two-terminal unlearnability certificate")
    _add_common(sub, "k")

    sub = commands.add_parser("search-cutdim", help="random search for high-dimension instances")
    _add_common(sub, "n", "seed", "trials", "mode", "nontrivial")
    return parser


def _emit(report: dict, fmt: str, out: str | None) -> None:
    if fmt == "json":
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    else:
        rows = []
        for key in sorted(report):
            value = report[key]
            if isinstance(value, (dict, list)) or value is None:
                value = json.dumps(value, sort_keys=True)
            rows.append((key, value))
        import io

        buffer = io.StringIO()
        writer = csv.writer(buffer)
        writer.writerow(("key", "value"))
        writer.writerows(rows)
        text = buffer.getvalue()
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = _HANDLERS[args.command](args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(report, args.format, args.out)
    return 0 if report.get("pass", True) else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
