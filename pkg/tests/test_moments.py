from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import all_words, alpha_word, coin, hword
from patwait import (
    InvalidInputError,
    ProbModel,
    UnreachablePatternError,
    Word,
    coin_moment_partition,
    expected_time,
    extremal_expected,
    fubini,
    moment,
    moment_report,
    moment_run_rec,
    moment_run_tail_rec,
    occurrence_rate,
    overlaps,
    reverse,
    set_partitions,
    variance,
    word_probability,
)

UNIFORM2 = ProbModel.uniform(2)
BELL = [1, 1, 2, 5, 15, 52, 203, 877, 4140]


def partitions_by_insertion(n):
    """Independent set-partition enumerator: insert each element into every
    existing block or a new one."""
    parts = [[[1]]]
    for x in range(2, n + 1):
        nxt = []
        for p in parts:
            for i in range(len(p)):
                nxt.append([list(b) for b in p[:i]] + [p[i] + [x]] + [list(b) for b in p[i + 1:]])
            nxt.append([list(b) for b in p] + [[x]])
        parts = nxt
    return parts


def canon(blocks):
    return frozenset(frozenset(b) for b in blocks)


def test_set_partitions_counts():
    assert len(set_partitions(1)) == 1
    assert len(set_partitions(3)) == 5
    assert len(set_partitions(4)) == 15
    for n in range(1, 8):
        assert len(set_partitions(n)) == BELL[n]


def test_set_partitions_match_insertion_oracle():
    for n in range(1, 7):
        mine = {canon(p.blocks) for p in set_partitions(n)}
        oracle = {canon(p) for p in partitions_by_insertion(n)}
        assert mine == oracle
        assert len(mine) == len(set_partitions(n))  # no duplicates


def test_set_partitions_structure_and_order():
    parts = set_partitions(3)
    assert parts[0].blocks == ((1, 2, 3),)
    assert parts[-1].blocks == ((1,), (2,), (3,))
    assert [p.blocks for p in parts] == [
        ((1, 2, 3),),
        ((1, 2), (3,)),
        ((1, 3), (2,)),
        ((1,), (2, 3)),
        ((1,), (2,), (3,)),
    ]
    for p in set_partitions(5):
        flat = sorted(x for b in p.blocks for x in b)
        assert flat == list(range(1, 6))
        assert all(b for b in p.blocks)


def test_set_partitions_range_guard():
    with pytest.raises(InvalidInputError):
        set_partitions(0)
    with pytest.raises(InvalidInputError):
        set_partitions(13)


def test_expected_abracadabra():
    value = expected_time(alpha_word("ABRACADABRA"), ProbModel.uniform(26))
    assert value == 26 ** 11 + 26 ** 4 + 26


def test_expected_run_closed_form():
    for k in range(1, 9):
        for p in (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(9, 10)):
            value = expected_time(hword("H" * k), coin(p))
            assert value == (1 - p ** k) / ((1 - p) * p ** k)
            assert value == sum(p ** -i for i in range(1, k + 1))


def test_expected_htt_biased():
    assert expected_time(hword("HTT"), coin(Fraction(2, 3))) == Fraction(27, 2)


def test_expected_single_overlap_is_reciprocal_probability():
    cases = [
        (hword("HT"), UNIFORM2),
        (hword("HHT"), coin(Fraction(2, 3))),
        (Word((1, 2), 3), ProbModel.uniform(3)),
    ]
    for pattern, model in cases:
        assert len(overlaps(pattern)) == 1
        assert expected_time(pattern, model) == 1 / word_probability(pattern, model)


def test_expected_unreachable_pattern():
    with pytest.raises(UnreachablePatternError):
        expected_time(hword("HT"), ProbModel((Fraction(1), Fraction(0))))


MOMENT_ROWS = [
    ("H", Fraction(1, 2), [2, 6, 26, 150, 1082, 9366, 94586]),
    ("HH", Fraction(1, 2), [6, 58, 822, 15514, 366006]),
    ("HT", Fraction(1, 2), [4, 20, 124, 932, 8284, 85220, 997084]),
    ("H", Fraction(1, 3), [3, 15, 111, 1095, 13503, 199815, 3449631]),
    ("HH", Fraction(1, 3), [12, 258, 8274, 353742]),
    ("H", Fraction(1, 4), [4, 28, 292, 4060, 70564]),
    ("H", Fraction(1, 5), [5, 45, 605, 10845, 243005]),
]


def test_moment_reference_rows():
    for text, p, row in MOMENT_ROWS:
        pattern = hword(text)
        model = coin(p)
        for n, expected in enumerate(row, start=1):
            assert moment(pattern, model, n) == expected


def expanded_moment(pattern, model, n):
    """The n = 1..4 moment expressions written out term by term, as an
    independent route (power sums of the overlap data, no set partitions)."""
    ov = overlaps(pattern)
    lens = ov.lengths()
    probs = [word_probability(r, model) for r in ov]
    def g(b):
        return sum(Fraction((1 - L) ** b - (-L) ** b) / p for L, p in zip(lens, probs))
    s1 = g(1)
    if n == 1:
        return s1
    if n == 2:
        return 2 * s1 ** 2 + g(2)
    if n == 3:
        return 6 * s1 ** 3 + 6 * s1 * g(2) + sum(
            Fraction((1 - L) ** 3 + L ** 3) / p for L, p in zip(lens, probs)
        )
    if n == 4:
        return (24 * s1 ** 4 + 36 * s1 ** 2 * g(2) + 6 * g(2) ** 2
                + 8 * s1 * g(3) + g(4))
    raise ValueError(n)


def test_moment_matches_expanded_derivative_forms():
    cases = [
        (hword("HH"), UNIFORM2),
        (hword("HTH"), coin(Fraction(2, 3))),
        (Word((1, 3, 2, 1, 1), 3), ProbModel((Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)))),
        (alpha_word("ABA", 3), ProbModel.uniform(3)),
    ]
    for pattern, model in cases:
        for n in (1, 2, 3, 4):
            assert moment(pattern, model, n) == expanded_moment(pattern, model, n)


def test_moment_reversal_invariance_exhaustive_small():
    model = ProbModel((Fraction(2, 3), Fraction(1, 3)))
    for w in all_words(2, 6):
        for n in (1, 2, 3):
            assert moment(w, model, n) == moment(reverse(w), model, n)


@settings(max_examples=40)
@given(st.lists(st.integers(1, 3), min_size=1, max_size=7), st.integers(1, 4))
def test_moment_reversal_invariance_property(letters, n):
    model = ProbModel((Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)))
    w = Word(tuple(letters), 3)
    assert moment(w, model, n) == moment(reverse(w), model, n)


def test_moment_jensen_bound():
    for pattern, model in ((hword("HH"), UNIFORM2), (hword("HTT"), coin(Fraction(2, 3)))):
        e1 = expected_time(pattern, model)
        for n in range(2, 7):
            assert moment(pattern, model, n) >= e1 ** n


def test_moment_guards():
    with pytest.raises(InvalidInputError):
        moment(hword("HH"), UNIFORM2, 0)
    with pytest.raises(InvalidInputError):
        moment(hword("HH"), UNIFORM2, 13)
    with pytest.raises(UnreachablePatternError):
        moment(hword("HT"), ProbModel((Fraction(1), Fraction(0))), 2)


def test_variance_examples():
    assert variance(hword("H"), UNIFORM2) == 2
    assert variance(hword("HH"), UNIFORM2) == 22
    # degenerate one-face die: the waiting time is deterministic
    one = ProbModel((Fraction(1),))
    run = Word((1, 1, 1), 1)
    assert expected_time(run, one) == 3
    assert variance(run, one) == 0


def test_variance_explicit_form():
    for pattern, model in ((hword("HH"), UNIFORM2), (hword("HTH"), coin(Fraction(1, 3)))):
        ov = overlaps(pattern)
        probs = [word_probability(r, model) for r in ov]
        s1 = sum(1 / p for p in probs)
        correction = sum(
            Fraction((1 - L) ** 2 - L ** 2) / p for L, p in zip(ov.lengths(), probs)
        )
        assert variance(pattern, model) == s1 ** 2 + correction


# closed forms for the run game (moment orders 1..4, general heads probability)
def run_closed_forms(k, p):
    q = 1 - p
    pk = p ** k
    e1 = (1 - pk) / (q * pk)
    e2 = 2 * (1 - pk) / (q ** 2 * pk ** 2) - (2 * k + 1 - pk) / (q * pk)
    e3 = (6 * (1 - pk) / (q ** 3 * pk ** 3)
          - (12 * k + 6 - (6 * k + 6) * pk) / (q ** 2 * pk ** 2)
          + (3 * k ** 2 + 3 * k + 1 - pk) / (q * pk))
    e4 = (24 * (1 - pk) / (q ** 4 * pk ** 4)
          - (72 * k + 36 - (48 * k + 36) * pk) / (q ** 3 * pk ** 3)
          + (48 * k ** 2 + 48 * k + 14 - (12 * k ** 2 + 24 * k + 14) * pk) / (q ** 2 * pk ** 2)
          - (4 * k ** 3 + 6 * k ** 2 + 4 * k + 1 - pk) / (q * pk))
    return e1, e2, e3, e4


def test_moment_run_rec_closed_forms():
    for k in range(1, 6):
        for p in (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(9, 10)):
            closed = run_closed_forms(k, p)
            for n in (1, 2, 3, 4):
                assert moment_run_rec(k, p, n) == closed[n - 1]


def test_moment_run_rec_dyadic_specials():
    for k in range(1, 9):
        assert moment_run_rec(k, Fraction(1, 2), 1) == 2 ** (k + 1) - 2
        assert moment_run_rec(k, Fraction(1, 2), 2) == 2 ** (2 * k + 3) - (2 * k + 5) * 2 ** (k + 1) + 2
        assert moment_run_rec(k, Fraction(1, 2), 3) == (
            3 * 2 ** (3 * k + 4) - 3 * (2 * k + 3) * 2 ** (2 * k + 3)
            + (3 * k ** 2 + 15 * k + 13) * 2 ** (k + 1) - 2
        )
        assert moment_run_rec(k, Fraction(1, 2), 4) == (
            3 * 2 ** (4 * k + 7) - 3 * (6 * k + 7) * 2 ** (3 * k + 5)
            + (24 * k ** 2 + 72 * k + 43) * 2 ** (2 * k + 3)
            - (4 * k ** 3 + 30 * k ** 2 + 52 * k + 29) * 2 ** (k + 1) + 2
        )


def test_moment_run_rec_zeroth_and_validation():
    assert moment_run_rec(3, Fraction(1, 2), 0) == 1
    with pytest.raises(InvalidInputError):
        moment_run_rec(3, Fraction(0), 1)
    with pytest.raises(InvalidInputError):
        moment_run_rec(3, Fraction(1), 1)
    with pytest.raises(InvalidInputError):
        moment_run_rec(0, Fraction(1, 2), 1)


# closed forms for the run-plus-tails game (moment orders 1..5)
def run_tail_closed_forms(k, p):
    q = 1 - p
    pk = p ** k
    e1 = 1 / (q * pk)
    e2 = 2 / (q ** 2 * pk ** 2) - (2 * k + 1) / (q * pk)
    e3 = (6 / (q ** 3 * pk ** 3) - (12 * k + 6) / (q ** 2 * pk ** 2)
          + (3 * k ** 2 + 3 * k + 1) / (q * pk))
    e4 = (24 / (q ** 4 * pk ** 4) - (72 * k + 36) / (q ** 3 * pk ** 3)
          + (48 * k ** 2 + 48 * k + 14) / (q ** 2 * pk ** 2)
          - (4 * k ** 3 + 6 * k ** 2 + 4 * k + 1) / (q * pk))
    e5 = (120 / (q ** 5 * pk ** 5) - 240 * (2 * k + 1) / (q ** 4 * pk ** 4)
          + 30 * (18 * k ** 2 + 18 * k + 5) / (q ** 3 * pk ** 3)
          - 10 * (16 * k ** 3 + 24 * k ** 2 + 14 * k + 3) / (q ** 2 * pk ** 2)
          + ((k + 1) ** 5 - k ** 5) / (q * pk))
    return e1, e2, e3, e4, e5


def test_moment_run_tail_rec_closed_forms():
    for k in range(1, 6):
        for p in (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(9, 10)):
            closed = run_tail_closed_forms(k, p)
            for n in (1, 2, 3, 4, 5):
                assert moment_run_tail_rec(k, p, n) == closed[n - 1]


def test_moment_run_tail_rec_dyadic_fubini_identity():
    # at p = 1/2 the tail term collapses to a power of two times an ordered
    # Bell number
    from math import comb
    p = Fraction(1, 2)
    for k in range(1, 7):
        values = [Fraction(1)]
        for n in range(1, 6):
            rec = moment_run_tail_rec(k, p, n)
            rhs = Fraction(2 ** (k + 1) * fubini(n))
            for j in range(1, n):
                rhs += comb(n, j) * values[j] * sum(i ** (n - j) * 2 ** (k - i) for i in range(1, k + 1))
            assert rec == rhs
            values.append(rec)


def test_moment_run_tail_rec_zeroth_and_validation():
    assert moment_run_tail_rec(2, Fraction(1, 3), 0) == 1
    with pytest.raises(InvalidInputError):
        moment_run_tail_rec(2, Fraction(3, 2), 1)


def test_coin_partition_run_agrees():
    for k in range(1, 7):
        for p in (Fraction(1, 2), Fraction(2, 3)):
            for n in range(1, 6):
                assert coin_moment_partition("run", k, 1, p, n) == moment_run_rec(k, p, n)
                assert coin_moment_partition("run", k, 99, p, n) == moment_run_rec(k, p, n)


def test_coin_partition_run_tail_agrees():
    for k in range(1, 6):
        for p in (Fraction(1, 2), Fraction(2, 3)):
            for n in range(1, 6):
                assert coin_moment_partition("run-tail", k, 1, p, n) == moment_run_tail_rec(k, p, n)


def test_coin_partition_general_tail_lengths():
    # H^k T^ell has a single overlap, so the specialized formula must match
    # the generic set-partition route on the actual word
    for k, ell in ((1, 1), (2, 1), (1, 2), (2, 2), (3, 2)):
        word = hword("H" * k + "T" * ell)
        for p in (Fraction(1, 2), Fraction(2, 5)):
            model = coin(p)
            for n in range(1, 5):
                assert coin_moment_partition("run-tail", k, ell, p, n) == moment(word, model, n)


def test_coin_partition_mathcounts_value():
    assert coin_moment_partition("run-tail", 1, 2, Fraction(2, 3), 1) == Fraction(27, 2)


def test_coin_partition_validation():
    with pytest.raises(InvalidInputError):
        coin_moment_partition("runs", 2, 1, Fraction(1, 2), 1)
    with pytest.raises(InvalidInputError):
        coin_moment_partition("run-tail", 2, 0, Fraction(1, 2), 1)
    with pytest.raises(InvalidInputError):
        coin_moment_partition("run", 2, 1, Fraction(1, 2), 0)


def test_occurrence_rate():
    assert occurrence_rate(hword("HH"), UNIFORM2, 600) == 100
    assert occurrence_rate(hword("HT"), UNIFORM2, 600) == 150
    # fewer overlaps -> higher occurrence rate
    assert occurrence_rate(hword("HT"), UNIFORM2, 100) > occurrence_rate(hword("HH"), UNIFORM2, 100)
    with pytest.raises(InvalidInputError):
        occurrence_rate(hword("HH"), UNIFORM2, 0)


def test_extremal_uniform():
    best, argmax = extremal_expected(2, 3, UNIFORM2)
    assert best == 14
    assert argmax == hword("HHH")
    # minimum by direct enumeration: m^k, attained at single-overlap words
    values = {w: expected_time(w, UNIFORM2) for w in all_words(2, 4, min_len=4)}
    assert min(values.values()) == 2 ** 4
    for w, v in values.items():
        if v == 2 ** 4:
            assert overlaps(w).lengths() == (4,)


def test_extremal_biased_counterexample():
    model = ProbModel((Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)))
    for k in range(2, 6):
        run = Word((1,) * k, 3)
        bumped = Word((1,) * (k - 1) + (2,), 3)
        assert expected_time(bumped, model) == 2 ** (k + 1)
        assert expected_time(run, model) == 2 ** (k + 1) - 2
        best, argmax = extremal_expected(3, k, model)
        p = Fraction(1, 4)  # least likely face
        assert best == (1 - p ** k) / ((1 - p) * p ** k)
        assert argmax == Word((2,) * k, 3)


def test_extremal_guards():
    with pytest.raises(InvalidInputError):
        extremal_expected(10, 7, ProbModel.uniform(10))
    with pytest.raises(UnreachablePatternError):
        extremal_expected(2, 2, ProbModel((Fraction(1), Fraction(0))))


def test_moment_report_invariants():
    rep = moment_report(hword("HHT"), UNIFORM2, 4)
    assert rep.variance == rep.moments[1] - rep.moments[0] ** 2
    assert rep.moments[1] >= rep.moments[0] ** 2
    assert all(a < b for a, b in zip(rep.moments, rep.moments[1:]))  # E(Y) > 1 here
    single = moment_report(hword("H"), UNIFORM2, 1)
    assert single.variance == variance(hword("H"), UNIFORM2) == 2
