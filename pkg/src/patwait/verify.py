"""Independent oracles: pattern automaton with exact dynamic programming,
exhaustive enumeration, and a seeded Monte Carlo simulator.

The automaton route shares nothing with the cluster algebra beyond the word
type, which is what makes coefficient-for-coefficient agreement between the
two a genuine cross-check.  The simulator's generator is written out in full
(xorshift64*, seeded through one splitmix64 mixing step) so runs reproduce
bit-for-bit anywhere; faces are sampled by inverting cumulative probabilities
converted once to doubles, which introduces a sampling bias bounded by double
rounding (~2^-53 per threshold) and nothing else.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import ceil, lcm, sqrt

from .cluster import RationalSeries
from .errors import InvalidInputError
from .moments import moment
from .words import ProbModel, Word, border_table

ENUMERATION_BUDGET = 10 ** 7
DEFAULT_CAP_LIMIT = 10 ** 6

MASK64 = (1 << 64) - 1
_GOLDEN64 = 0x9E3779B97F4A7C15


@dataclass(frozen=True)
class PatternAutomaton:
    """Matching automaton: the state is the length of the longest pattern
    prefix equal to a suffix of the text read so far.  Reaching state |S|
    marks the first occurrence; analyses treat that state as absorbing."""

    pattern: Word
    transitions: tuple[tuple[int, ...], ...]  # [state][face-1] -> state
    failure: tuple[int, ...]                  # failure[q] = longest proper border of prefix q

    @property
    def accept(self) -> int:
        return len(self.pattern)

    def step(self, state: int, face: int) -> int:
        return self.transitions[state][face - 1]

    def border_lengths(self) -> tuple[int, ...]:
        """Lengths of all borders of the full pattern (the overlap lengths),
        increasing and including the pattern itself."""
        out = [len(self.pattern)]
        q = self.failure[len(self.pattern)]
        while q:
            out.append(q)
            q = self.failure[q]
        return tuple(sorted(out))


def build_automaton(pattern: Word) -> PatternAutomaton:
    """Deterministic automaton whose first visit to state |S| is the first
    occurrence of the pattern; built from the border table."""
    if len(pattern) == 0:
        raise InvalidInputError("the empty word cannot be used as a pattern")
    letters, m, size = pattern.letters, pattern.m, len(pattern)
    failure = border_table(letters)
    transitions = [[0] * m for _ in range(size + 1)]
    for q in range(size + 1):
        for a in range(1, m + 1):
            if q < size and letters[q] == a:
                transitions[q][a - 1] = q + 1
            elif q > 0:
                transitions[q][a - 1] = transitions[failure[q]][a - 1]
    return PatternAutomaton(pattern, tuple(map(tuple, transitions)), tuple(failure))


def exact_distribution(pattern: Word, model: ProbModel, order: int) -> RationalSeries:
    """P(Y = d) for d = 0..order by forward DP over automaton states.

    Masses are carried as integers scaled by q^d (q = common denominator of
    the face probabilities), so the DP is exact and the single reduction per
    step happens in the final Fraction."""
    if model.m != pattern.m:
        raise InvalidInputError(
            f"alphabet size mismatch: pattern has m={pattern.m}, model has m={model.m}"
        )
    if order < len(pattern):
        raise InvalidInputError(
            f"order must be at least the pattern length {len(pattern)}"
        )
    auto = build_automaton(pattern)
    size = len(pattern)
    q = lcm(*(p.denominator for p in model.probs))
    nums = [p.numerator * (q // p.denominator) for p in model.probs]
    mass = [0] * size
    mass[0] = 1
    coeffs = [Fraction(0)]
    scale = 1
    for _ in range(order):
        scale *= q
        new = [0] * size
        hit = 0
        for state, mu in enumerate(mass):
            if not mu:
                continue
            row = auto.transitions[state]
            for face in range(model.m):
                weight = nums[face]
                if not weight:
                    continue
                target = row[face]
                if target == size:
                    hit += mu * weight
                else:
                    new[target] += mu * weight
        mass = new
        coeffs.append(Fraction(hit, scale))
    return RationalSeries(tuple(coeffs))


def survival(pattern: Word, model: ProbModel, order: int) -> Fraction:
    """P(Y > order): the live DP mass after `order` steps."""
    ser = exact_distribution(pattern, model, max(order, len(pattern)))
    return 1 - sum(ser.coeffs[: order + 1])


def truncation_for_tail(pattern: Word, model: ProbModel, bound=Fraction(1, 10 ** 9),
                        moment_order: int = 0, max_order: int = 10 ** 5) -> int:
    """Smallest DP horizon whose estimated tail drops below the bound.

    With moment_order 0 this is simply the surviving mass.  For higher orders
    the survivors beyond step d still contribute roughly d^n each, so the
    estimate charges the surviving mass at the observed geometric decay rate
    with a factor-2 safety margin.  Survival decays geometrically for
    reachable patterns; the hard stop only guards against near-unreachable
    inputs."""
    auto = build_automaton(pattern)
    size = len(pattern)
    q = lcm(*(p.denominator for p in model.probs))
    nums = [p.numerator * (q // p.denominator) for p in model.probs]
    mass = [0] * size
    mass[0] = 1
    scale = 1
    prev = Fraction(1)
    for d in range(1, max_order + 1):
        scale *= q
        new = [0] * size
        for state, mu in enumerate(mass):
            if not mu:
                continue
            row = auto.transitions[state]
            for face in range(model.m):
                if nums[face]:
                    target = row[face]
                    if target != size:
                        new[target] += mu * nums[face]
        mass = new
        live = Fraction(sum(mass), scale)
        if live == 0:
            return d
        if moment_order == 0:
            estimate = live
        else:
            ratio = live / prev
            if ratio >= 1:  # still in the transient; keep stepping
                prev = live
                continue
            overshoot = 2 / (1 - ratio)
            estimate = 2 * live * (d + overshoot) ** moment_order
        if estimate < bound:
            return d
        prev = live
    raise InvalidInputError(f"tail estimate did not drop below {bound} within {max_order} steps")


def brute_force_counts(pattern: Word, d: int) -> tuple[int, int]:
    """Exhaustive counts over all m^d words of length d: how many avoid the
    pattern as a factor, and how many contain it exactly once, at the very
    end."""
    if len(pattern) == 0:
        raise InvalidInputError("the empty word cannot be used as a pattern")
    if d < 0:
        raise InvalidInputError("word length d must be nonnegative")
    if pattern.m ** d > ENUMERATION_BUDGET:
        raise InvalidInputError(
            f"enumeration of {pattern.m}^{d} words exceeds budget {ENUMERATION_BUDGET}"
        )
    target = pattern.letters
    k = len(target)
    avoiding = ending = 0
    for w in product(range(1, pattern.m + 1), repeat=d):
        count = 0
        for i in range(d - k + 1):
            if w[i:i + k] == target:
                count += 1
                if count > 1:
                    break
        if count == 0:
            avoiding += 1
        elif count == 1 and w[d - k:] == target:
            ending += 1
    return avoiding, ending


# ---------------------------------------------------------------------------
# seeded simulation


def _splitmix64(z: int) -> int:
    z = (z + _GOLDEN64) & MASK64
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & MASK64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class Xorshift64Star:
    """xorshift64* stream.  (seed, stream) pairs are mixed through splitmix64
    into a nonzero state, so distinct worker indices get independent streams
    from one master seed."""

    MULT = 2685821657736338717

    def __init__(self, seed: int, stream: int = 0):
        state = _splitmix64((seed & MASK64) ^ _splitmix64(stream & MASK64))
        self.state = state or _GOLDEN64

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x = (x ^ (x << 25)) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * self.MULT) & MASK64

    def next_double(self) -> float:
        """Uniform in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * 2.0 ** -53


@dataclass(frozen=True)
class SimConfig:
    """Trial count, master seed, and an optional per-episode roll cap.

    When cap is omitted it defaults to 100x the expected waiting time
    (rounded up), provided that expectation is at most 1e6."""

    trials: int
    seed: int
    cap: int | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise InvalidInputError("trials must be at least 1")


@dataclass(frozen=True)
class SimReport:
    """Empirical moments (orders 1..4) with standard errors and z-scores
    against the exact values.  Capped episodes are excluded from the moments
    and flagged."""

    pattern: Word
    model: ProbModel
    trials: int
    seed: int
    cap: int
    hits: int
    capped: int
    means: tuple
    stderrs: tuple
    exact: tuple
    z_scores: tuple
    capped_excluded: bool


def simulate(pattern: Word, model: ProbModel, cfg: SimConfig) -> SimReport:
    """Run seeded episodes on the automaton and report empirical moments.

    Deterministic given the seed: stopping times are histogrammed and the
    moment sums are computed in exact integer arithmetic before the final
    float conversion."""
    if model.m != pattern.m:
        raise InvalidInputError(
            f"alphabet size mismatch: pattern has m={pattern.m}, model has m={model.m}"
        )
    exact = tuple(moment(pattern, model, t) for t in (1, 2, 3, 4))
    cap = cfg.cap
    if cap is None:
        if exact[0] > DEFAULT_CAP_LIMIT:
            raise InvalidInputError(
                f"expected waiting time {exact[0]} exceeds {DEFAULT_CAP_LIMIT}; supply an explicit cap"
            )
        cap = ceil(100 * exact[0])
    if cap < len(pattern):
        raise InvalidInputError(f"cap must allow at least {len(pattern)} rolls")

    thresholds = []
    acc = Fraction(0)
    for p in model.probs:
        acc += p
        thresholds.append(float(acc))
    thresholds[-1] = 1.0  # absorb double rounding in the last bin

    auto = build_automaton(pattern)
    transitions = auto.transitions
    accept = auto.accept
    rng = Xorshift64Star(cfg.seed, stream=0)
    x = rng.state
    mult = Xorshift64Star.MULT
    histogram: dict[int, int] = {}
    capped = 0
    for _ in range(cfg.trials):
        state = 0
        d = 0
        while d < cap:
            # inline xorshift64* step (identical stream to rng.next_double)
            x ^= x >> 12
            x = (x ^ (x << 25)) & MASK64
            x ^= x >> 27
            u = (((x * mult) & MASK64) >> 11) * 2.0 ** -53
            face = 0
            while u >= thresholds[face]:
                face += 1
            state = transitions[state][face]
            d += 1
            if state == accept:
                break
        if state == accept:
            histogram[d] = histogram.get(d, 0) + 1
        else:
            capped += 1
    rng.state = x

    hits = cfg.trials - capped
    sums = [0] * 9
    for d, count in histogram.items():
        power = 1
        for j in range(1, 9):
            power *= d
            sums[j] += count * power

    means, stderrs, z_scores = [], [], []
    for t in (1, 2, 3, 4):
        if hits == 0:
            means.append(None)
            stderrs.append(None)
            z_scores.append(None)
            continue
        mean = sums[t] / hits
        var = max(sums[2 * t] / hits - mean * mean, 0.0)
        se = sqrt(var / hits)
        target = float(exact[t - 1])
        z_scores.append((mean - target) / se if se > 0 else (0.0 if mean == target else float("inf")))
        means.append(mean)
        stderrs.append(se)
    return SimReport(
        pattern=pattern,
        model=model,
        trials=cfg.trials,
        seed=cfg.seed,
        cap=cap,
        hits=hits,
        capped=capped,
        means=tuple(means),
        stderrs=tuple(stderrs),
        exact=exact,
        z_scores=tuple(z_scores),
        capped_excluded=capped > 0,
    )
