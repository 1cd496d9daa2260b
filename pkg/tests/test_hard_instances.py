import itertools
from fractions import Fraction
from random import Random

import pytest

from sfmlab import (
    CostBasedInstance,
    InconsistentOracleError,
    PermutationAdversary,
    PermutationInstance,
    Subset,
    ValueOracle,
    adversary_pairs,
    apply_marks,
    check_submodular,
    make_pair_family,
    permutation_base_table,
    replay_matches,
    solve_permutation_family,
)

from common import nontrivial_min

F = Fraction


def S(n, *members):
    return Subset.from_members(n, members)


# ---------------------------------------------------------------- instances


def test_permutation_values_identity_n4():
    inst = PermutationInstance(4, (1, 2, 3, 4), (0,) * 5)
    assert inst.value(S(4, 2, 3)) == 12  # no prefix inside, |S|=2
    assert inst.value(S(4, 1, 2, 4)) == 4  # prefix length 2
    assert inst.value(S(4, 2, 3, 4)) == 18
    assert inst.value(S(4, 1, 3, 4)) == 10
    assert inst.value(S(4, 1, 2, 3)) == 0  # a chain set, mark 0


def test_permutation_marks_and_minimum():
    inst = PermutationInstance(4, (1, 2, 3, 4), (0, 1, 0, 0, 1))
    assert inst.value(S(4, 1)) == -1
    assert inst.value(Subset.full(4)) == -1
    assert inst.value(Subset.empty(4)) == 0
    assert inst.minimum() == -1
    assert inst.argmin() == S(4, 1)  # first chain set carrying the max mark
    flat = PermutationInstance(3, (2, 3, 1), (0, 0, 0, 0))
    assert flat.minimum() == 0
    assert flat.argmin() == Subset.empty(3)


def test_permutation_validation():
    with pytest.raises(ValueError):
        PermutationInstance(3, (1, 2, 2), (0, 0, 0, 0))
    with pytest.raises(ValueError):
        PermutationInstance(3, (1, 2, 3), (0, 0, 0))  # needs n+1 marks
    with pytest.raises(ValueError):
        PermutationInstance(3, (1, 2, 3), (0, 0, 0, 2))  # marks are 0/1
    inst = PermutationInstance(3, (1, 2, 3), (0,) * 4)
    with pytest.raises(ValueError):
        inst.value(Subset(0, 4))


def test_permutation_json_roundtrip():
    inst = PermutationInstance(5, (3, 1, 4, 5, 2), (1, 0, 1, 0, 0, 1))
    data = inst.to_json()
    back = PermutationInstance.from_json(data)
    assert (back.n, back.sigma, back.marks) == (inst.n, inst.sigma, inst.marks)
    with pytest.raises(ValueError):
        PermutationInstance.from_json({"kind": "cost_based"})


def test_base_table_patch_agrees_with_instance():
    rng = Random(1)
    for n in (3, 4, 5):
        sigma = list(range(1, n + 1))
        rng.shuffle(sigma)
        base, chains = permutation_base_table(n, sigma)
        marks = [rng.randint(0, 1) for _ in range(n + 1)]
        table = apply_marks(base, chains, marks)
        inst = PermutationInstance(n, sigma, marks)
        assert all(
            F(table[bits]) == inst.value(Subset(bits, n)) for bits in range(1 << n)
        )


def test_permutation_family_submodular_small():
    for sigma in itertools.permutations((1, 2, 3)):
        for cbits in range(16):
            marks = [(cbits >> k) & 1 for k in range(4)]
            inst = PermutationInstance(3, sigma, marks)
            assert check_submodular(inst.value, 3) is None


# ---------------------------------------------------------------- adversary


def test_adversary_trace_n4():
    adv = PermutationAdversary(4)
    # strict superset of the empty prefix: decoy, sigma(1) := 2
    v, kind = adv.answer(S(4, 1, 3))
    assert (v, kind) == (12, "decoy")
    assert adv.partial_sigma == (2,)
    v, kind = adv.answer(Subset.empty(4))
    assert (v, kind) == (0, "important")
    v, kind = adv.answer(S(4, 2))
    assert (v, kind) == (0, "important")  # now a defined prefix
    # missing the defined prefix: useless, and consistent with the decoy answer
    v, kind = adv.answer(S(4, 1, 3))
    assert (v, kind) == (12, "useless")
    v, kind = adv.answer(S(4, 2, 3))  # decoy again: sigma(2) := 1
    assert (v, kind) == (5, "decoy")
    assert adv.partial_sigma == (2, 1)
    assert adv.decoy_count == 2
    assert adv.distinct_important_count == 2
    # full set is important at any state
    v, kind = adv.answer(Subset.full(4))
    assert (v, kind) == (0, "important")


def test_adversary_important_count_bounded_by_decoys():
    # only prefixes of the defined sigma can be important, so at most
    # decoys + 2 of them exist at any point; drive one full game and check
    adv = PermutationAdversary(5)
    rng = Random(3)
    for _ in range(40):
        adv.answer(Subset(rng.randrange(1 << 5), 5))
        assert adv.distinct_important_count <= adv.decoy_count + 2


def test_finalize_branches():
    # guess 0 with missing importants: free marks filled with 1
    adv = PermutationAdversary(3)
    adv.answer(Subset.empty(3))
    inst, fooled = adv.finalize(F(0))
    assert fooled and inst.minimum() == -1
    # nonzero guess: zero fill, minimum 0
    adv = PermutationAdversary(3)
    adv.answer(Subset.empty(3))
    inst, fooled = adv.finalize(F(-1))
    assert fooled and inst.minimum() == 0
    # all n+1 importants pinned to 0: guess 0 is correct; the prefixes must
    # be queried as they become defined, interleaved with the decoys that
    # define them
    adv = PermutationAdversary(3)
    adv.answer(Subset.empty(3))  # important c_0
    adv.answer(S(3, 2, 3))  # decoy: sigma(1) := 1
    adv.answer(S(3, 1))  # important c_1
    adv.answer(S(3, 1, 3))  # decoy: sigma(2) := 2
    adv.answer(S(3, 1, 2))  # important c_2
    adv.answer(Subset.full(3))  # important c_3
    assert adv.partial_sigma == (1, 2)
    assert adv.distinct_important_count == 4
    inst, fooled = adv.finalize(F(0))
    assert not fooled
    assert inst.minimum() == 0


def test_finalize_replay_consistency():
    # whatever was answered must hold in the finalized instance
    for seed in range(10):
        adv = PermutationAdversary(4)
        oracle = ValueOracle(lambda s: adv.answer(s)[0], 4)
        rng = Random(seed)
        for _ in range(rng.randint(0, 12)):
            oracle.evaluate(Subset(rng.randrange(16), 4))
        guess = F(rng.choice((0, -1, 7)))
        inst, _ = adv.finalize(guess)
        assert replay_matches(oracle.transcript, inst.value)


def test_adversary_fools_small_budgets():
    for n in (3, 4, 5):
        for budget in range(2 * n):
            adv = PermutationAdversary(n)
            oracle = ValueOracle(lambda s: adv.answer(s)[0], n)
            seen = [oracle.evaluate(Subset(b % (1 << n), n)) for b in range(budget)]
            guess = min(seen) if seen else F(0)
            inst, fooled = adv.finalize(guess)
            assert fooled
            assert replay_matches(oracle.transcript, inst.value)


# ---------------------------------------------------------------- 2n solver


def test_solver_exact_on_all_small_instances():
    for n in (3, 4):
        for sigma in itertools.permutations(range(1, n + 1)):
            base, chains = permutation_base_table(n, sigma)
            for cbits in range(1 << (n + 1)):
                marks = [(cbits >> k) & 1 for k in range(n + 1)]
                table = apply_marks(base, chains, marks)
                oracle = ValueOracle(lambda s, t=table: F(t[s.bits]), n)
                result = solve_permutation_family(oracle)
                assert result.queries_used == 2 * n
                assert result.min_value == min(table)
                assert table[result.argmin.bits] == min(table)


def test_solver_beats_adversary():
    for n in (3, 5, 7):
        adv = PermutationAdversary(n)
        oracle = ValueOracle(lambda s: adv.answer(s)[0], n)
        result = solve_permutation_family(oracle)
        inst, fooled = adv.finalize(result.min_value)
        assert not fooled
        assert result.queries_used == 2 * n
        assert replay_matches(oracle.transcript, inst.value)


def test_solver_rejects_foreign_functions():
    with pytest.raises(InconsistentOracleError):
        solve_permutation_family(ValueOracle(lambda s: F(0), 4))
    with pytest.raises(InconsistentOracleError):
        solve_permutation_family(ValueOracle(lambda s: F(1), 4))


def test_solver_rejects_corrupted_chain_marks():
    base, chains = permutation_base_table(4, (1, 2, 3, 4))
    table = apply_marks(base, chains, (0,) * 5)
    table[chains[2]] = -5  # chain value outside {0, -1}
    with pytest.raises(InconsistentOracleError):
        solve_permutation_family(ValueOracle(lambda s: F(table[s.bits]), 4))


def test_solver_rejects_duplicate_positions():
    base, chains = permutation_base_table(4, (1, 2, 3, 4))
    table = apply_marks(base, chains, (0,) * 5)
    # make the co-singletons of 2 and 3 both answer position 2's value
    co3 = (1 << 4) - 1 - (1 << 2)
    co2 = (1 << 4) - 1 - (1 << 1)
    table[co3] = table[co2]
    with pytest.raises(InconsistentOracleError):
        solve_permutation_family(ValueOracle(lambda s: F(table[s.bits]), 4))


def test_solver_rejects_phase_inconsistent_oracle():
    # the final prefix is queried once per phase; answers that drift
    # between the two passes must be caught
    base, chains = permutation_base_table(4, (1, 2, 3, 4))
    table = apply_marks(base, chains, (0, 0, 0, 1, 0))
    seen = []

    def drifting(s):
        if s.bits == chains[3]:
            seen.append(s.bits)
            return F(-1) if len(seen) == 1 else F(0)
        return F(table[s.bits])

    with pytest.raises(InconsistentOracleError):
        solve_permutation_family(ValueOracle(drifting, 4))


# ---------------------------------------------------------------- pair family


def test_pair_family_values_n4():
    fam = make_pair_family(4)
    assert fam.base.value(Subset.full(4)) == -16
    v12 = fam.variants[(1, 2)]
    assert v12.value(S(4, 3, 4)) == -1  # the hidden co-pair
    assert v12.value(S(4, 2, 3)) == 2
    assert v12.value(S(4, 1, 3, 4)) == 0
    assert len(fam.variants) == 6


def test_pair_family_minima():
    for n in (3, 4, 5):
        fam = make_pair_family(n)
        assert nontrivial_min(fam.base.value, n) == 0
        for inst in fam.variants.values():
            assert nontrivial_min(inst.value, n) == -1


def test_pair_family_n3_folds_singleton_costs():
    fam = make_pair_family(3)
    v = fam.variants[(1, 2)]
    assert [v.value(S(3, i)) for i in (1, 2, 3)] == [1, 1, -1]
    assert v.value(Subset.full(3)) == -9
    # cost entries never sit on sets of size < 2
    for inst in (fam.base, *fam.variants.values()):
        assert all(bits.bit_count() >= 2 for bits, _ in inst.cost)


def test_pair_family_submodular():
    for n in (3, 4):
        fam = make_pair_family(n)
        for inst in (fam.base, *fam.variants.values()):
            assert check_submodular(inst.value, n) is None


def test_make_pair_family_validation():
    with pytest.raises(ValueError):
        make_pair_family(2)


def test_cost_based_json_roundtrip():
    fam = make_pair_family(4)
    inst = fam.variants[(2, 4)]
    back = CostBasedInstance.from_json(inst.to_json())
    assert back == inst
    assert all(
        back.value(Subset(b, 4)) == inst.value(Subset(b, 4)) for b in range(16)
    )


def test_adversary_pairs_branches():
    n = 4
    fam = make_pair_family(n)
    co_pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]

    def transcript_for(count):
        oracle = ValueOracle(fam.base.value, n)
        for i, j in co_pairs[:count]:
            oracle.evaluate(Subset(fam.co_pair_bits(i, j), n))
        return oracle.transcript

    # guess 0 with a co-pair unqueried: a refuting variant comes back
    refuter = adversary_pairs(transcript_for(3), F(0), n)
    assert refuter is not None
    assert nontrivial_min(refuter.value, n) == -1
    assert replay_matches(transcript_for(3), refuter.value)
    # nonzero guess: the base function itself refutes
    base_back = adversary_pairs(transcript_for(3), F(-1), n)
    assert base_back == fam.base
    # all co-pairs queried, correct guess: nothing can refute
    assert adversary_pairs(transcript_for(len(co_pairs)), F(0), n) is None
    # all co-pairs queried, wrong guess: base refutes
    assert adversary_pairs(transcript_for(len(co_pairs)), F(5), n) == fam.base


def test_adversary_pairs_rejects_foreign_transcript():
    n = 4
    oracle = ValueOracle(lambda s: F(123), n)
    oracle.evaluate(S(n, 1, 2))
    with pytest.raises(InconsistentOracleError):
        adversary_pairs(oracle.transcript, F(0), n)
