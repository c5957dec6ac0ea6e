"""Shared helpers for the test suite."""

from fractions import Fraction
from itertools import product

from patwait import ProbModel, Word


def hword(text: str) -> Word:
    """Binary word from an H/T string, H -> 1, T -> 2."""
    return Word(tuple(1 if c == "H" else 2 for c in text), 2)


def coin(p) -> ProbModel:
    """Coin model with heads probability p (face 1 = heads)."""
    p = Fraction(p)
    return ProbModel((p, 1 - p))


def alpha_word(text: str, m: int = 26) -> Word:
    """Word from capital letters, A -> 1 .. Z -> 26."""
    return Word(tuple(ord(c) - 64 for c in text), m)


def all_words(m: int, max_len: int, min_len: int = 1):
    """Every word on {1..m} with length in [min_len, max_len]."""
    for length in range(min_len, max_len + 1):
        for letters in product(range(1, m + 1), repeat=length):
            yield Word(letters, m)


def count_occurrences(pattern: tuple, w: tuple) -> int:
    """Overlapping occurrence count of `pattern` inside `w` (tuple letters)."""
    k = len(pattern)
    return sum(1 for i in range(len(w) - k + 1) if w[i:i + k] == pattern)
