"""Exact waiting-time moments.

The expected waiting time is the sum of reciprocal overlap probabilities; the
n-th moment expands over set partitions of {1..n}, with one factor per block
that depends only on the block size.  Coin-game specializations (a run of
heads, or a run of heads closed by tails) get their own recursions and
partition formulas, which must agree with the general route.  All arithmetic
is exact; n is capped because the partition sum grows like the Bell numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb, factorial

from .errors import InvalidInputError, UnreachablePatternError
from .sequences import eulerian, eulerian_ext
from .words import OverlapSet, ProbModel, Word, overlaps, word_probability

MAX_MOMENT_ORDER = 12       # Bell(13) ~ 2.8e7 partitions; past this the sum is impractical
SEARCH_BUDGET = 10 ** 6     # exhaustive pattern-space guard


@dataclass(frozen=True)
class SetPartition:
    """Partition of {1..n} into disjoint nonempty blocks, listed in order of
    first appearance."""

    blocks: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    def block_sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)


def _rgs_strings(n):
    """Restricted-growth strings of length n in lexicographic order."""
    a = [0] * n
    b = [1] * n  # b[i] = 1 + max(a[:i]) for i >= 1
    while True:
        yield a
        i = n - 1
        while i > 0 and a[i] == b[i]:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        nb = b[i] if a[i] < b[i] else a[i] + 1
        for j in range(i + 1, n):
            a[j] = 0
            b[j] = nb


def set_partitions(n: int) -> list[SetPartition]:
    """All partitions of {1..n}, enumerated lexicographically by
    restricted-growth string (deterministic order)."""
    if not 1 <= n <= MAX_MOMENT_ORDER:
        raise InvalidInputError(f"set_partitions: n must be in 1..{MAX_MOMENT_ORDER}")
    out = []
    for a in _rgs_strings(n):
        blocks: list[list[int]] = [[] for _ in range(max(a) + 1)]
        for pos, label in enumerate(a, start=1):
            blocks[label].append(pos)
        out.append(SetPartition(tuple(tuple(b) for b in blocks)))
    return out


def _partition_block_sizes(n):
    """Block-size vectors of all set partitions of {1..n}, in enumeration order."""
    for a in _rgs_strings(n):
        sizes = [0] * (max(a) + 1)
        for label in a:
            sizes[label] += 1
        yield sizes


def _overlap_probs(pattern: Word, model: ProbModel) -> tuple[OverlapSet, list[Fraction]]:
    ov = overlaps(pattern)
    probs = [word_probability(r, model) for r in ov]
    if any(p == 0 for p in probs):
        raise UnreachablePatternError(
            f"pattern {pattern} uses a zero-probability face; its waiting time is infinite"
        )
    return ov, probs


def expected_time(pattern: Word, model: ProbModel) -> Fraction:
    """Expected number of rolls until the pattern first occurs: the sum of
    1/P(R) over its overlaps R."""
    if pattern.m != model.m:
        raise InvalidInputError(
            f"alphabet size mismatch: pattern has m={pattern.m}, model has m={model.m}"
        )
    _, probs = _overlap_probs(pattern, model)
    return sum(1 / p for p in probs)


def moment(pattern: Word, model: ProbModel, n: int) -> Fraction:
    """Exact n-th moment of the waiting time, via the set-partition expansion
    over the overlap set."""
    if pattern.m != model.m:
        raise InvalidInputError(
            f"alphabet size mismatch: pattern has m={pattern.m}, model has m={model.m}"
        )
    if not 1 <= n <= MAX_MOMENT_ORDER:
        raise InvalidInputError(f"moment: n must be in 1..{MAX_MOMENT_ORDER}")
    ov, probs = _overlap_probs(pattern, model)
    lengths = ov.lengths()
    block_factor = [Fraction(0)] * (n + 1)
    for b in range(1, n + 1):
        block_factor[b] = sum(
            Fraction((1 - L) ** b - (-L) ** b) / p for L, p in zip(lengths, probs)
        )
    total = Fraction(0)
    for sizes in _partition_block_sizes(n):
        term = Fraction(factorial(len(sizes)))
        for s in sizes:
            term *= block_factor[s]
        total += term
    return total


def variance(pattern: Word, model: ProbModel) -> Fraction:
    """Variance of the waiting time: second moment minus squared expectation."""
    return moment(pattern, model, 2) - expected_time(pattern, model) ** 2


def _wasted_prefix_sums(k: int, p: Fraction, t: int) -> Fraction:
    """Sum over i = 1..k of (1-p) i^t / p^(k-i+1), by direct summation and by
    the split Eulerian route (the two must agree)."""
    q = 1 - p
    direct = sum(q * i ** t / p ** (k - i + 1) for i in range(1, k + 1))
    split = sum(
        eulerian(t, i) * p ** i - eulerian_ext(t, i, k) * p ** (k + i + 1)
        for i in range(t + 1)
    ) / (q ** t * p ** (k + 1))
    assert split == direct, f"wasted-prefix identity failed at k={k}, p={p}, t={t}"
    return direct


def moment_run_rec(k: int, p, n: int) -> Fraction:
    """Moments of the waiting time for a run of k heads, by recursion on the
    moment order."""
    p = Fraction(p)
    if not 0 < p < 1:
        raise InvalidInputError(f"heads probability must lie strictly between 0 and 1, got {p}")
    if k < 1:
        raise InvalidInputError("run length k must be at least 1")
    if n < 0:
        raise InvalidInputError("moment order n must be nonnegative")
    values = [Fraction(1)]
    for t in range(1, n + 1):
        val = Fraction(k ** t)
        for j in range(t):
            val += comb(t, j) * values[j] * _wasted_prefix_sums(k, p, t - j)
        values.append(val)
    return values[n]


def moment_run_tail_rec(k: int, p, n: int) -> Fraction:
    """Moments of the waiting time for k heads followed by a tails, by
    recursion on the moment order.  The infinite first-tails sum is evaluated
    in closed Eulerian form."""
    p = Fraction(p)
    if not 0 < p < 1:
        raise InvalidInputError(f"heads probability must lie strictly between 0 and 1, got {p}")
    if k < 1:
        raise InvalidInputError("run length k must be at least 1")
    if n < 0:
        raise InvalidInputError("moment order n must be nonnegative")
    q = 1 - p
    values = [Fraction(1)]
    for t in range(1, n + 1):
        # sum over i >= 1 of (1-p) i^t / p^(k-i+1)
        val = sum(eulerian(t, i) * p ** i for i in range(t + 1)) / (q ** t * p ** (k + 1))
        for j in range(1, t):
            val += comb(t, j) * values[j] * _wasted_prefix_sums(k, p, t - j)
        values.append(val)
    return values[n]


def coin_moment_partition(kind: str, k: int, ell: int, p, n: int) -> Fraction:
    """Signed set-partition formulas for the coin game, specialized to a run
    of k heads ('run') or k heads followed by ell tails ('run-tail').  The
    tail length is ignored for 'run'."""
    p = Fraction(p)
    if not 0 < p < 1:
        raise InvalidInputError(f"heads probability must lie strictly between 0 and 1, got {p}")
    if k < 1:
        raise InvalidInputError("run length k must be at least 1")
    if not 1 <= n <= MAX_MOMENT_ORDER:
        raise InvalidInputError(f"moment order n must be in 1..{MAX_MOMENT_ORDER}")
    if kind == "run":
        def block_factor(b: int) -> Fraction:
            return sum(Fraction(i ** b - (i - 1) ** b) / p ** i for i in range(1, k + 1))
    elif kind == "run-tail":
        if ell < 1:
            raise InvalidInputError("tail length ell must be at least 1")
        length = k + ell
        base = p ** k * (1 - p) ** ell
        def block_factor(b: int) -> Fraction:
            return Fraction(length ** b - (length - 1) ** b) / base
    else:
        raise InvalidInputError(f"kind must be 'run' or 'run-tail', got {kind!r}")
    factors = [Fraction(0)] + [block_factor(b) for b in range(1, n + 1)]
    total = Fraction(0)
    for sizes in _partition_block_sizes(n):
        sign = -1 if (n - len(sizes)) % 2 else 1
        term = Fraction(sign * factorial(len(sizes)))
        for s in sizes:
            term *= factors[s]
        total += term
    return total


def occurrence_rate(pattern: Word, model: ProbModel, rolls: int) -> Fraction:
    """Average number of occurrences of the pattern in the given number of
    rolls: rolls divided by the expected waiting time."""
    if rolls < 1:
        raise InvalidInputError("rolls must be at least 1")
    return Fraction(rolls) / expected_time(pattern, model)


def extremal_expected(m: int, k: int, model: ProbModel) -> tuple[Fraction, Word]:
    """Exhaustively maximize the expected waiting time over all length-k
    patterns on m faces.  Returns the maximum and its lexicographically first
    witness (a run of the least likely face)."""
    if m < 1 or k < 1:
        raise InvalidInputError("need m >= 1 and k >= 1")
    if model.m != m:
        raise InvalidInputError(f"model has m={model.m}, expected {m}")
    if m ** k > SEARCH_BUDGET:
        raise InvalidInputError(f"search space m^k = {m ** k} exceeds budget {SEARCH_BUDGET}")
    if any(p == 0 for p in model.probs):
        raise UnreachablePatternError(
            "a face has probability zero, so the maximum expected time is infinite"
        )
    best: Fraction | None = None
    best_word: Word | None = None
    for letters in product(range(1, m + 1), repeat=k):
        value = expected_time(Word(letters, m), model)
        if best is None or value > best:
            best, best_word = value, Word(letters, m)
    return best, best_word


@dataclass(frozen=True)
class MomentReport:
    """Exact moments E(Y^1)..E(Y^n_max) and variance for one pattern/model pair."""

    pattern: Word
    model: ProbModel
    n_max: int
    moments: tuple[Fraction, ...]
    variance: Fraction


def moment_report(pattern: Word, model: ProbModel, n_max: int) -> MomentReport:
    """Bundle the first n_max moments with the variance."""
    if not 1 <= n_max <= MAX_MOMENT_ORDER:
        raise InvalidInputError(f"n_max must be in 1..{MAX_MOMENT_ORDER}")
    values = tuple(moment(pattern, model, t) for t in range(1, n_max + 1))
    second = values[1] if n_max >= 2 else moment(pattern, model, 2)
    return MomentReport(pattern, model, n_max, values, second - values[0] ** 2)
