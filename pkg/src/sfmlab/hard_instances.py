"""Query-complexity hard instances and their adversaries.

Two families live here.  The permutation family hides a permutation and a
0/1 mark vector behind a value oracle; an adaptive adversary forces any
correct minimizer to spend 2n queries, and a matching solver achieves
exactly 2n.  The cost-based pair family consists of a base function plus
one variant per vertex pair, pairwise distinguishable only at a single
subset each, so C(n,2) specific queries are unavoidable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .oracle import (
    MAX_GROUND_SIZE,
    QueryTranscript,
    Subset,
    ValueOracle,
    fraction_to_str,
    str_to_fraction,
)


class InconsistentOracleError(ValueError):
    """Oracle answers match no instance of the family being solved."""


def _check_permutation(n: int, sigma: tuple[int, ...]) -> None:
    if sorted(sigma) != list(range(1, n + 1)):
        raise ValueError(f"sigma must be a permutation of 1..{n}")


class PermutationInstance:
    """Hidden-permutation function over [n].

    The chain sets are the prefixes of the permutation (the empty set is
    the 0-th).  Querying the i-th chain set returns -marks[i]; every other
    subset S returns (|S| - j) * (n + 2 - j), with j the length of the
    longest chain prefix inside S.  Marks are 0/1, so the minimum is
    -max(marks), attained at the first maximally marked chain set.
    """

    __slots__ = ("n", "sigma", "marks", "_chain_bits", "_chain_index")

    def __init__(self, n: int, sigma, marks) -> None:
        if not 1 <= n <= MAX_GROUND_SIZE:
            raise ValueError(f"n must be in 1..{MAX_GROUND_SIZE}")
        sigma = tuple(int(x) for x in sigma)
        _check_permutation(n, sigma)
        marks = tuple(int(x) for x in marks)
        if len(marks) != n + 1 or any(m not in (0, 1) for m in marks):
            raise ValueError("marks must be n+1 values in {0, 1}")
        self.n = n
        self.sigma = sigma
        self.marks = marks
        bits_list = [0]
        acc = 0
        for x in sigma:
            acc |= 1 << (x - 1)
            bits_list.append(acc)
        self._chain_bits = tuple(bits_list)
        self._chain_index = {bits: i for i, bits in enumerate(bits_list)}

    def chain_set(self, i: int) -> Subset:
        """The i-th prefix of the hidden permutation, i in 0..n."""
        return Subset(self._chain_bits[i], self.n)

    def value(self, subset: Subset) -> Fraction:
        if subset.n != self.n:
            raise ValueError(f"subset over ground set of size {subset.n}, expected {self.n}")
        bits = subset.bits
        i = self._chain_index.get(bits)
        if i is not None:
            return Fraction(-self.marks[i])
        j = 0
        while j < self.n and (bits >> (self.sigma[j] - 1)) & 1:
            j += 1
        return Fraction((subset.size - j) * (self.n + 2 - j))

    def minimum(self) -> Fraction:
        return Fraction(-max(self.marks))

    def argmin(self) -> Subset:
        return self.chain_set(self.marks.index(max(self.marks)))

    def to_json(self) -> dict:
        return {"kind": "permutation", "n": self.n, "sigma": list(self.sigma), "c": list(self.marks)}

    @classmethod
    def from_json(cls, data: Mapping) -> "PermutationInstance":
        if data.get("kind") != "permutation":
            raise ValueError("not a permutation instance")
        return cls(int(data["n"]), data["sigma"], data["c"])


def eval_permutation_family(inst: PermutationInstance, subset: Subset) -> Fraction:
    return inst.value(subset)


def permutation_base_table(n: int, sigma) -> tuple[list[int], tuple[int, ...]]:
    """All-marks-zero integer value table plus the chain bitmasks.

    Patching the n+1 chain entries with -marks[i] (apply_marks) yields the
    table of any instance sharing this permutation, so bulk scans over mark
    vectors reuse one base table.
    """
    sigma = tuple(int(x) for x in sigma)
    _check_permutation(n, sigma)
    shifts = [x - 1 for x in sigma]
    table = []
    for bits in range(1 << n):
        j = 0
        while j < n and (bits >> shifts[j]) & 1:
            j += 1
        table.append((bits.bit_count() - j) * (n + 2 - j))
    bits_list = [0]
    acc = 0
    for s in shifts:
        acc |= 1 << s
        bits_list.append(acc)
    return table, tuple(bits_list)


def apply_marks(base: list[int], chain_bits: tuple[int, ...], marks) -> list[int]:
    table = list(base)
    for i, bits in enumerate(chain_bits):
        table[bits] = -int(marks[i])
    return table


class PermutationAdversary:
    """Adaptive answerer committing to the hidden instance as late as possible.

    Three query classes: a chain prefix (or the full set) is *important*
    and answered 0 while pinning its mark; a set missing part of the
    defined prefix is *useless*, answered by the generic formula; a strict
    superset of the defined prefix is a *decoy*, which extends the prefix
    by the smallest absent element so the formula answer stays consistent
    with every future completion.
    """

    def __init__(self, n: int) -> None:
        if not 1 <= n <= MAX_GROUND_SIZE:
            raise ValueError(f"n must be in 1..{MAX_GROUND_SIZE}")
        self.n = n
        self._full = (1 << n) - 1
        self._prefix: list[int] = []
        self._prefix_bits = [0]
        self._marks: dict[int, int] = {}
        self._important_bits: set[int] = set()
        self.decoy_count = 0

    @property
    def i(self) -> int:
        """Number of defined permutation outputs."""
        return len(self._prefix)

    @property
    def partial_sigma(self) -> tuple[int, ...]:
        return tuple(self._prefix)

    @property
    def partial_marks(self) -> dict[int, int]:
        return dict(self._marks)

    @property
    def distinct_important(self) -> frozenset[Subset]:
        return frozenset(Subset(b, self.n) for b in self._important_bits)

    @property
    def distinct_important_count(self) -> int:
        return len(self._important_bits)

    def answer(self, subset: Subset) -> tuple[Fraction, str]:
        if subset.n != self.n:
            raise ValueError(f"subset over ground set of size {subset.n}, expected {self.n}")
        bits = subset.bits
        # Chain prefixes and the full set are answerable at any state: the
        # full set is the final chain set no matter how sigma is completed.
        if bits in self._prefix_bits or bits == self._full:
            j = self.n if bits == self._full else self._prefix_bits.index(bits)
            self._marks[j] = 0
            self._important_bits.add(bits)
            return Fraction(0), "important"
        i = len(self._prefix)
        cur = self._prefix_bits[-1]
        if cur & ~bits:
            # Part of the defined prefix is missing, so no future extension
            # can change j(S); the formula answer is final.
            j = 0
            while j < i and (bits >> (self._prefix[j] - 1)) & 1:
                j += 1
            return Fraction((subset.size - j) * (self.n + 2 - j)), "useless"
        # Strict superset of the defined prefix: extend sigma by an element
        # outside S, capping j(S) at i forever.
        pick = next(e for e in range(1, self.n + 1) if not (bits >> (e - 1)) & 1)
        self._prefix.append(pick)
        self._prefix_bits.append(cur | (1 << (pick - 1)))
        self.decoy_count += 1
        return Fraction((subset.size - i) * (self.n + 2 - i)), "decoy"

    def finalize(self, guess: Fraction) -> tuple[PermutationInstance, bool]:
        """Complete the instance against the guess; True means fooled.

        With fewer than n+1 distinct important queries some mark is still
        free: it is set to contradict a guess of 0 or -1, and any other
        guess loses to the all-zeros completion since the minimum is
        always 0 or -1.
        """
        guess = Fraction(guess)
        used = set(self._prefix)
        sigma = self._prefix + [e for e in range(1, self.n + 1) if e not in used]
        if len(self._important_bits) < self.n + 1 and guess == 0:
            fill = 1
        else:
            fill = 0
        marks = [self._marks.get(j, fill) for j in range(self.n + 1)]
        inst = PermutationInstance(self.n, sigma, marks)
        return inst, guess != inst.minimum()


_POSITION_VALUE_CACHE: dict[int, dict[int, int]] = {}


def _position_by_value(n: int) -> dict[int, int]:
    # (n - k) * (n + 3 - k) is strictly decreasing in k on 1..n-1, hence invertible.
    table = _POSITION_VALUE_CACHE.get(n)
    if table is None:
        table = {(n - k) * (n + 3 - k): k for k in range(1, n)}
        _POSITION_VALUE_CACHE[n] = table
    return table


def solve_permutation_family(oracle: ValueOracle) -> "SolverResult":
    """Minimize any permutation-family function with exactly 2n queries.

    Querying the complement of each element i != 1 reveals its position:
    the answer is positive and position-determining unless i is last, where
    the complement is a chain set and the answer drops to 0 or -1.  That
    pins the permutation, and the n+1 chain queries read off every mark.
    """
    from .solvers import SolverResult

    n = oracle.n
    start = oracle.counter
    full = (1 << n) - 1
    by_value = _position_by_value(n)
    position_of: dict[int, int] = {}
    last_element = None
    last_answer = None
    for e in range(2, n + 1):
        v = oracle.evaluate(Subset(full & ~(1 << (e - 1)), n))
        if v <= 0:
            if v not in (0, -1):
                raise InconsistentOracleError(f"chain-set answer {v} outside {{0, -1}}")
            if last_element is not None:
                raise InconsistentOracleError("two elements claim the final position")
            last_element = e
            last_answer = v
            continue
        k = by_value.get(v) if v.denominator == 1 else None
        if k is None:
            raise InconsistentOracleError(f"answer {v} matches no position")
        if k in position_of:
            raise InconsistentOracleError(f"two elements claim position {k}")
        position_of[k] = e
    if last_element is None:
        position_of[n] = 1
    else:
        position_of[n] = last_element
        free = [k for k in range(1, n) if k not in position_of]
        if len(free) != 1:
            raise InconsistentOracleError("positions do not leave exactly one slot")
        position_of[free[0]] = 1
    sigma = [position_of[k] for k in range(1, n + 1)]

    marks = []
    acc = 0
    chain_bits = [0]
    for x in sigma:
        acc |= 1 << (x - 1)
        chain_bits.append(acc)
    for j, bits in enumerate(chain_bits):
        v = oracle.evaluate(Subset(bits, n))
        if v not in (0, -1):
            raise InconsistentOracleError(f"chain-set answer {v} outside {{0, -1}}")
        marks.append(-v)
    if last_answer is not None and -marks[n - 1] != last_answer:
        raise InconsistentOracleError("complement query and chain query disagree")

    best = max(marks)
    best_j = marks.index(best)
    return SolverResult(
        min_value=Fraction(-best),
        argmin=Subset(chain_bits[best_j], n),
        queries_used=oracle.counter - start,
    )


@dataclass(frozen=True)
class CostBasedInstance:
    """f(S) = sum of singleton values over S minus total cost of subsets of S.

    Costs are stored sparsely as (bitmask, value) pairs sorted by bitmask,
    nonzero only, each on a set of size >= 2; with non-negative costs this
    shape is always submodular.
    """

    n: int
    singleton_values: tuple[Fraction, ...]
    cost: tuple[tuple[int, Fraction], ...]

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_GROUND_SIZE:
            raise ValueError(f"n must be in 1..{MAX_GROUND_SIZE}")
        if len(self.singleton_values) != self.n:
            raise ValueError("one singleton value per element required")
        full = (1 << self.n) - 1
        prev = -1
        for bits, value in self.cost:
            if not prev < bits <= full:
                raise ValueError("cost bitmasks must be sorted, distinct, in range")
            if bits.bit_count() <= 1:
                raise ValueError("cost must vanish on sets of size <= 1")
            if value <= 0:
                raise ValueError("stored cost entries must be positive")
            prev = bits

    @classmethod
    def of(cls, n: int, singleton_values, cost_map: Mapping[int, Fraction]) -> "CostBasedInstance":
        singles = tuple(Fraction(v) for v in singleton_values)
        entries = tuple(
            (bits, Fraction(v)) for bits, v in sorted(cost_map.items()) if Fraction(v) != 0
        )
        return cls(n, singles, entries)

    def value(self, subset: Subset) -> Fraction:
        if subset.n != self.n:
            raise ValueError(f"subset over ground set of size {subset.n}, expected {self.n}")
        bits = subset.bits
        total = sum(
            (self.singleton_values[i] for i in range(self.n) if (bits >> i) & 1),
            Fraction(0),
        )
        for tbits, c in self.cost:
            if not tbits & ~bits:
                total -= c
        return total

    def to_json(self) -> dict:
        return {
            "kind": "cost_based",
            "n": self.n,
            "singletons": [fraction_to_str(v) for v in self.singleton_values],
            "cost": [[bits, fraction_to_str(v)] for bits, v in self.cost],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "CostBasedInstance":
        if data.get("kind") != "cost_based":
            raise ValueError("not a cost-based instance")
        return cls.of(
            int(data["n"]),
            [str_to_fraction(s) for s in data["singletons"]],
            {int(bits): str_to_fraction(s) for bits, s in data["cost"]},
        )


def eval_cost_based(inst: CostBasedInstance, subset: Subset) -> Fraction:
    return inst.value(subset)


@dataclass(frozen=True)
class PairFamily:
    """Base function plus one variant per vertex pair.

    Every variant agrees with the base everywhere except at the complement
    of its pair, where the base gives n-2 and the variant gives -1; the
    nontrivial minimum is 0 for the base and -1 for every variant.
    """

    n: int
    base: CostBasedInstance
    variants: dict[tuple[int, int], CostBasedInstance]

    def co_pair_bits(self, i: int, j: int) -> int:
        full = (1 << self.n) - 1
        return full & ~(1 << (i - 1)) & ~(1 << (j - 1))


def make_pair_family(n: int) -> PairFamily:
    if n < 3:
        raise ValueError("pair family needs n >= 3")
    full = (1 << n) - 1
    ones = [Fraction(1)] * n
    base_cost = {full & ~(1 << (i - 1)): Fraction(n - 1) for i in range(1, n + 1)}
    base_cost[full] = Fraction(2 * n)
    base = CostBasedInstance.of(n, ones, base_cost)
    variants: dict[tuple[int, int], CostBasedInstance] = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            co_pair = full & ~(1 << (i - 1)) & ~(1 << (j - 1))
            cost = {
                full & ~(1 << (k - 1)): Fraction(n - 1)
                for k in range(1, n + 1)
                if k not in (i, j)
            }
            cost[full] = Fraction(3 * n - 1)
            singles = list(ones)
            if n == 3:
                # The co-pair is a singleton here; its cost folds into the
                # singleton value so the size >= 2 shape is preserved.
                k = co_pair.bit_length() - 1
                singles[k] -= Fraction(n - 1)
            else:
                cost[co_pair] = Fraction(n - 1)
            variants[(i, j)] = CostBasedInstance.of(n, singles, cost)
    return PairFamily(n=n, base=base, variants=variants)


def adversary_pairs(
    transcript: QueryTranscript, guess: Fraction, n: int
) -> CostBasedInstance | None:
    """Pick a family member consistent with the transcript refuting the guess.

    The base answers every query, so the transcript must match it.  Family
    members disagree only at complements of pairs; while one of those is
    unqueried both the base (nontrivial minimum 0) and its variant
    (minimum -1) remain live, so any guess can be refuted.  None is
    returned only when every co-pair set was queried and the guess is the
    base's nontrivial minimum.
    """
    guess = Fraction(guess)
    family = make_pair_family(n)
    for subset, answer in transcript:
        if subset.n != n:
            raise ValueError(f"transcript subset over ground set {subset.n}, expected {n}")
        if family.base.value(subset) != answer:
            raise InconsistentOracleError(
                f"transcript answer {answer} on bitmask {subset.bits} does not match the base"
            )
    queried = transcript.queried_bits()
    missing = [
        (i, j)
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
        if family.co_pair_bits(i, j) not in queried
    ]
    if missing:
        if guess == 0:
            return family.variants[missing[0]]
        return family.base
    if guess == 0:
        return None
    return family.base
