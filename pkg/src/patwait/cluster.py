"""Generating functions for pattern avoidance and first-occurrence times.

The multivariate cluster construction is specialized immediately: every face
variable is replaced by p_i * x at build time, so all arithmetic happens on
dense univariate polynomials with exact rational coefficients.  The cluster
denominator is assembled from the overlap set of the pattern; clearing
fractions yields an integer-coefficient numerator/denominator pair.  No
polynomial gcd is taken beyond removing the integer content, which keeps the
construction simple and is irrelevant for series extraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .errors import InvalidInputError, UnreachablePatternError
from .words import ProbModel, Word, overlaps, word_probability

# ---------------------------------------------------------------------------
# dense polynomial helpers (little-endian coefficient lists of Fractions)


def _trim(coeffs: list[Fraction]) -> list[Fraction]:
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _poly_add(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return _trim(out)


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return _trim(out)


def _poly_eval(coeffs, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


@dataclass(frozen=True)
class RationalFunction:
    """Ratio of dense polynomials, constant coefficient first.

    Canonical form: integer coefficients with no common integer content and a
    positive nonzero constant term in the denominator, so the expansion at
    x = 0 is well defined and starts at the combinatorial constant term."""

    numerator: tuple[Fraction, ...]
    denominator: tuple[Fraction, ...]

    def __post_init__(self):
        num = _trim([Fraction(c) for c in self.numerator])
        den = _trim([Fraction(c) for c in self.denominator])
        if den[0] == 0:
            raise InvalidInputError("denominator must have a nonzero constant term")
        scale = lcm(*(c.denominator for c in num + den))
        num_i = [int(c * scale) for c in num]
        den_i = [int(c * scale) for c in den]
        content = gcd(*(abs(v) for v in num_i + den_i))
        content = content or 1
        if den_i[0] < 0:
            content = -content
        object.__setattr__(self, "numerator", tuple(Fraction(v, content) for v in num_i))
        object.__setattr__(self, "denominator", tuple(Fraction(v, content) for v in den_i))

    def evaluate(self, x) -> Fraction:
        x = Fraction(x)
        den = _poly_eval(self.denominator, x)
        if den == 0:
            raise ZeroDivisionError(f"denominator vanishes at x={x}")
        return _poly_eval(self.numerator, x) / den


@dataclass(frozen=True)
class RationalSeries:
    """Truncated power series with exact rational coefficients c[0..order]."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, d: int) -> Fraction:
        return self.coeffs[d]

    def partial_sums(self) -> tuple[Fraction, ...]:
        out = []
        acc = Fraction(0)
        for c in self.coeffs:
            acc += c
            out.append(acc)
        return tuple(out)


def _overlap_weight_poly(pattern: Word, model: ProbModel) -> list[Fraction]:
    """The cluster weight A(x) = sum over overlaps R of x^(|S|-|R|) / P(R)."""
    coeffs = [Fraction(0)] * len(pattern)
    for r in overlaps(pattern):
        p = word_probability(r, model)
        if p == 0:
            raise UnreachablePatternError(
                f"pattern {pattern} uses a zero-probability face; it almost surely never occurs"
            )
        degree = len(pattern) - len(r)
        if degree >= len(coeffs):
            coeffs.extend([Fraction(0)] * (degree + 1 - len(coeffs)))
        coeffs[degree] += 1 / p
    return _trim(coeffs)


def _stopping_denominator(pattern: Word, model: ProbModel) -> list[Fraction]:
    # (1 - x * sum p_i) * A(x) + x^|S|; face probabilities sum to 1 exactly
    weight = _overlap_weight_poly(pattern, model)
    one_minus_x = [Fraction(1), -sum(model.probs)]
    den = _poly_mul(one_minus_x, weight)
    x_pow = [Fraction(0)] * len(pattern) + [Fraction(1)]
    return _poly_add(den, x_pow)


def avoiding_gf(pattern: Word, model: ProbModel) -> RationalFunction:
    """Generating function whose x^d coefficient is the exact probability that
    d independent rolls avoid the pattern as a factor.

    If the pattern contains a zero-probability face it can never occur, and
    the result degenerates to 1/(1-x)."""
    if len(pattern) == 0:
        raise InvalidInputError("the empty word cannot be used as a pattern")
    if pattern.m != model.m:
        raise InvalidInputError(
            f"alphabet size mismatch: pattern has m={pattern.m}, model has m={model.m}"
        )
    if word_probability(pattern, model) == 0:
        return RationalFunction((Fraction(1),), (Fraction(1), Fraction(-1)))
    weight = _overlap_weight_poly(pattern, model)
    return RationalFunction(tuple(weight), tuple(_stopping_denominator(pattern, model)))


def stopping_gf(pattern: Word, model: ProbModel) -> RationalFunction:
    """Probability generating function of the waiting time: the x^d
    coefficient is the exact probability that the pattern first occurs on
    roll d."""
    if len(pattern) == 0:
        raise InvalidInputError("the empty word cannot be used as a pattern")
    if pattern.m != model.m:
        raise InvalidInputError(
            f"alphabet size mismatch: pattern has m={pattern.m}, model has m={model.m}"
        )
    numerator = tuple([Fraction(0)] * len(pattern) + [Fraction(1)])
    return RationalFunction(numerator, tuple(_stopping_denominator(pattern, model)))


def series(f: RationalFunction, order: int) -> RationalSeries:
    """Exact Maclaurin coefficients c[0..order] by the linear recurrence the
    denominator imposes on the coefficient stream."""
    if order < 0:
        raise InvalidInputError("series: truncation order must be nonnegative")
    num, den = f.numerator, f.denominator
    if den[0] == 0:
        raise InvalidInputError("series: denominator has zero constant term")
    coeffs: list[Fraction] = []
    for d in range(order + 1):
        acc = num[d] if d < len(num) else Fraction(0)
        for j in range(1, min(d, len(den) - 1) + 1):
            acc -= den[j] * coeffs[d - j]
        coeffs.append(acc / den[0])
    return RationalSeries(tuple(coeffs))


def truncated_moment(pattern: Word, model: ProbModel, n: int, order: int) -> Fraction:
    """Partial moment sum d^n * P(Y = d) over d <= order: a lower bound that
    is nondecreasing in the truncation order and converges to the exact
    moment."""
    if n < 0:
        raise InvalidInputError("truncated_moment: n must be nonnegative")
    if order < len(pattern):
        raise InvalidInputError(
            f"truncated_moment: order must be at least the pattern length {len(pattern)}"
        )
    ser = series(stopping_gf(pattern, model), order)
    return sum((d ** n) * c for d, c in enumerate(ser.coeffs))
