"""Bitmask ground sets, exact rational value oracles, and exhaustive checkers.

The ground set is {1, ..., n} with element i stored as bit i-1 of a plain
int, so a set function is just ``Subset -> Fraction`` and every structural
checker can afford a full 2^n (or 4^n) sweep at the sizes this package
targets.  All values are exact rationals; the submodularity scanner
rescales each value table to integers (exactly, by the common denominator)
so the quadratic pair sweep can run on machine words when that is provably
safe, and falls back to arbitrary-precision integers when it is not.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Callable, Iterator

import numpy as np

# Hard ceiling for anything that enumerates all subsets.
MAX_GROUND_SIZE = 24
# The pair sweep is 4^n; past this it is not worth waiting for.
SUBMODULARITY_SCAN_LIMIT = 16
SYMMETRY_SCAN_LIMIT = 20
DIMINISHING_RETURNS_SCAN_LIMIT = 10

# A scaled table whose entries stay below this bound cannot overflow an
# int64 when two entries are added.
_INT64_SAFE = 1 << 62
# Full 4^n index matrices are cached up to this size (8 MB of indices at 10).
_FULL_MATRIX_LIMIT = 10


class GroundSetMismatchError(ValueError):
    """A subset was used with an oracle or system over a different ground set."""


class EnumerationLimitError(ValueError):
    """An exhaustive scan was requested past its configured size guard."""


@dataclass(frozen=True, slots=True)
class Subset:
    """An immutable subset of {1, ..., n}, element i living at bit i-1."""

    bits: int
    n: int

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_GROUND_SIZE:
            raise ValueError(f"ground-set size must be in 1..{MAX_GROUND_SIZE}, got {self.n}")
        if not 0 <= self.bits < (1 << self.n):
            raise ValueError(f"bits {self.bits:#x} outside ground set of size {self.n}")

    @classmethod
    def empty(cls, n: int) -> "Subset":
        return cls(0, n)

    @classmethod
    def full(cls, n: int) -> "Subset":
        return cls((1 << n) - 1, n)

    @classmethod
    def of(cls, n: int, *members: int) -> "Subset":
        return cls.from_members(n, members)

    @classmethod
    def from_members(cls, n: int, members) -> "Subset":
        bits = 0
        for i in members:
            if not 1 <= i <= n:
                raise ValueError(f"element {i} outside 1..{n}")
            bits |= 1 << (i - 1)
        return cls(bits, n)

    @property
    def size(self) -> int:
        return self.bits.bit_count()

    def contains(self, i: int) -> bool:
        return 1 <= i <= self.n and (self.bits >> (i - 1)) & 1 == 1

    def members(self) -> tuple[int, ...]:
        return tuple(i for i in range(1, self.n + 1) if (self.bits >> (i - 1)) & 1)

    def complement(self) -> "Subset":
        return Subset(self.bits ^ ((1 << self.n) - 1), self.n)

    def union(self, other: "Subset") -> "Subset":
        self._check_same_ground(other)
        return Subset(self.bits | other.bits, self.n)

    def intersection(self, other: "Subset") -> "Subset":
        self._check_same_ground(other)
        return Subset(self.bits & other.bits, self.n)

    def is_subset_of(self, other: "Subset") -> bool:
        self._check_same_ground(other)
        return self.bits & ~other.bits == 0

    __or__ = union
    __and__ = intersection

    def _check_same_ground(self, other: "Subset") -> None:
        if self.n != other.n:
            raise GroundSetMismatchError(f"mixed ground sets: {self.n} vs {other.n}")

    def __repr__(self) -> str:
        inner = "{" + ",".join(str(i) for i in self.members()) + "}"
        return f"Subset({inner}, n={self.n})"


SetFunction = Callable[[Subset], Fraction]


def iter_subsets(n: int, nontrivial: bool = False) -> Iterator[Subset]:
    """All subsets of {1..n} in increasing bitmask order; optionally skip the
    empty set and the full set."""
    full = (1 << n) - 1
    for bits in range(1 << n):
        if nontrivial and bits in (0, full):
            continue
        yield Subset(bits, n)


def fraction_to_str(x: Fraction) -> str:
    """Serialize as "p/q" in lowest terms (denominator always present)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def str_to_fraction(s: str) -> Fraction:
    """Parse "p/q" or a bare integer string."""
    text = s.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(text))


class QueryTranscript:
    """Append-only record of (queried subset, returned value) pairs.

    Duplicates are permitted; distinctness, when a caller needs it, is
    computed from the entries rather than enforced here.
    """

    def __init__(self) -> None:
        self.entries: list[tuple[Subset, Fraction]] = []

    def append(self, subset: Subset, value: Fraction) -> None:
        self.entries.append((subset, value))

    def queried_bits(self) -> set[int]:
        return {s.bits for s, _ in self.entries}

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


class ValueOracle:
    """Counting wrapper around a set function.

    Every evaluate() appends to the transcript, so the counter always equals
    the transcript length.  Replaying the transcript against a pure
    underlying function reproduces every recorded answer; adaptive
    adversaries satisfy the same property only against their finalized
    instance.
    """

    def __init__(self, fn: SetFunction, n: int) -> None:
        if not 1 <= n <= MAX_GROUND_SIZE:
            raise ValueError(f"ground-set size must be in 1..{MAX_GROUND_SIZE}, got {n}")
        self._fn = fn
        self.n = n
        self.transcript = QueryTranscript()

    @property
    def counter(self) -> int:
        return len(self.transcript)

    @property
    def fn(self) -> SetFunction:
        """Raw function, for checks that must not count as queries."""
        return self._fn

    def evaluate(self, subset: Subset) -> Fraction:
        if subset.n != self.n:
            raise GroundSetMismatchError(
                f"subset over ground set of size {subset.n}, oracle expects {self.n}"
            )
        value = Fraction(self._fn(subset))
        self.transcript.append(subset, value)
        return value


def replay_matches(transcript: QueryTranscript, fn: SetFunction) -> bool:
    """True iff `fn` reproduces every recorded answer of the transcript."""
    return all(Fraction(fn(s)) == v for s, v in transcript)


def value_table(fn: SetFunction, n: int) -> list[Fraction]:
    """All 2^n values of `fn`, indexed by subset bitmask."""
    return [Fraction(fn(Subset(bits, n))) for bits in range(1 << n)]


def _common_integer_table(table: list[Fraction]) -> list[int]:
    # Positive rescaling preserves every inequality the checkers test.
    den = 1
    for v in table:
        den = lcm(den, v.denominator)
    return [int(v * den) for v in table]


_pair_index_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _pair_indices(n: int) -> tuple[np.ndarray, np.ndarray]:
    cached = _pair_index_cache.get(n)
    if cached is None:
        idx = np.arange(1 << n, dtype=np.int64)
        cached = (idx[:, None] | idx[None, :], idx[:, None] & idx[None, :])
        _pair_index_cache[n] = cached
    return cached


def check_submodular(fn: SetFunction, n: int) -> tuple[Subset, Subset] | None:
    """Scan all pairs X, Y for f(X|Y) + f(X&Y) <= f(X) + f(Y).

    Returns None when the inequality holds everywhere, otherwise the
    lexicographically first violating pair ordered by (X bits, Y bits).
    """
    if n > SUBMODULARITY_SCAN_LIMIT:
        raise EnumerationLimitError(f"submodularity scan capped at n={SUBMODULARITY_SCAN_LIMIT}")
    table = value_table(fn, n)
    return check_submodular_ints(_common_integer_table(table), n)


def check_submodular_ints(ints: list[int], n: int) -> tuple[Subset, Subset] | None:
    """check_submodular on a pre-scaled integer value table (bulk-scan entry point)."""
    size = 1 << n
    if len(ints) != size:
        raise ValueError(f"value table has {len(ints)} entries, expected {size}")
    if max(abs(v) for v in ints) < _INT64_SAFE:
        t = np.array(ints, dtype=np.int64)
        if n <= _FULL_MATRIX_LIMIT:
            or_idx, and_idx = _pair_indices(n)
            bad = t[or_idx] + t[and_idx] > t[:, None] + t[None, :]
            if bad.any():
                flat = int(np.argmax(bad))
                return Subset(flat // size, n), Subset(flat % size, n)
            return None
        ys = np.arange(size, dtype=np.int64)
        for x in range(size):
            row = t[x | ys] + t[x & ys] > t[x] + t[ys]
            if row.any():
                return Subset(x, n), Subset(int(np.argmax(row)), n)
        return None
    # Values too large for int64: exact arbitrary-precision sweep.
    for x in range(size):
        tx = ints[x]
        for y in range(size):
            if ints[x | y] + ints[x & y] > tx + ints[y]:
                return Subset(x, n), Subset(y, n)
    return None


def check_diminishing_returns(fn: SetFunction, n: int) -> tuple[Subset, Subset, int] | None:
    """Equivalent marginal-gain form: f(S+i) - f(S) <= f(T+i) - f(T) for T <= S, i outside S.

    Cross-check for check_submodular; returns the first violating (S, T, i)
    in scan order, or None.
    """
    if n > DIMINISHING_RETURNS_SCAN_LIMIT:
        raise EnumerationLimitError(
            f"diminishing-returns scan capped at n={DIMINISHING_RETURNS_SCAN_LIMIT}"
        )
    table = value_table(fn, n)
    for s in range(1 << n):
        outside = [i for i in range(n) if not (s >> i) & 1]
        t = s
        while True:
            for i in outside:
                bit = 1 << i
                if table[s | bit] - table[s] > table[t | bit] - table[t]:
                    return Subset(s, n), Subset(t, n), i + 1
            if t == 0:
                break
            t = (t - 1) & s
    return None


def check_symmetric(fn: SetFunction, n: int) -> Subset | None:
    """Scan for f(S) == f(complement of S); returns the first violating S or None."""
    if n > SYMMETRY_SCAN_LIMIT:
        raise EnumerationLimitError(f"symmetry scan capped at n={SYMMETRY_SCAN_LIMIT}")
    table = value_table(fn, n)
    full = (1 << n) - 1
    for bits in range(1 << n):
        if table[bits] != table[bits ^ full]:
            return Subset(bits, n)
    return None
