"""Words over a finite alphabet, exact face probabilities, and overlap structure.

Letters are 1-based integers in {1..m}.  The empty word is representable
(it carries probability 1 in the generating-function algebra) but is rejected
wherever a stopping pattern is required.  All values here are immutable after
construction and safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidInputError


@dataclass(frozen=True)
class Word:
    """Immutable word on the alphabet {1..m}."""

    letters: tuple[int, ...]
    m: int

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        if self.m < 1:
            raise InvalidInputError(f"alphabet size must be at least 1, got {self.m}")
        for a in self.letters:
            if not 1 <= a <= self.m:
                raise InvalidInputError(f"letter {a} outside the alphabet 1..{self.m}")

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return ",".join(str(a) for a in self.letters) if self.letters else "(empty)"


@dataclass(frozen=True)
class ProbModel:
    """Face probabilities (p1..pm): exact nonnegative rationals summing to 1."""

    probs: tuple[Fraction, ...]

    def __post_init__(self):
        probs = tuple(Fraction(p) for p in self.probs)
        object.__setattr__(self, "probs", probs)
        if not probs:
            raise InvalidInputError("a probability model needs at least one face")
        if any(p < 0 for p in probs):
            raise InvalidInputError("face probabilities must be nonnegative")
        total = sum(probs)
        if total != 1:
            raise InvalidInputError(f"face probabilities must sum to 1, got {total}")

    @property
    def m(self) -> int:
        return len(self.probs)

    @classmethod
    def uniform(cls, m: int) -> "ProbModel":
        if m < 1:
            raise InvalidInputError(f"alphabet size must be at least 1, got {m}")
        return cls(tuple(Fraction(1, m) for _ in range(m)))


@dataclass(frozen=True)
class OverlapSet:
    """The nonempty prefixes of a pattern that are also suffixes, shortest first.

    The full pattern is always a member, so the set is never empty."""

    pattern: Word
    overlaps: tuple[Word, ...]

    def lengths(self) -> tuple[int, ...]:
        return tuple(len(r) for r in self.overlaps)

    def __iter__(self):
        return iter(self.overlaps)

    def __len__(self) -> int:
        return len(self.overlaps)


def border_table(letters: tuple[int, ...]) -> list[int]:
    """Failure table: entry i is the length of the longest proper border of the
    length-i prefix.  Computed by the classical linear-time scan."""
    n = len(letters)
    table = [0] * (n + 1)
    k = 0
    for i in range(1, n):
        while k and letters[i] != letters[k]:
            k = table[k]
        if letters[i] == letters[k]:
            k += 1
        table[i + 1] = k
    return table


def overlaps(pattern: Word) -> OverlapSet:
    """All nonempty prefixes of the pattern that are also suffixes of it.

    Runs in O(|pattern|) via the border table; the pattern itself is always
    included."""
    if len(pattern) == 0:
        raise InvalidInputError("the empty word cannot be used as a pattern")
    table = border_table(pattern.letters)
    lengths = [len(pattern)]
    k = table[len(pattern)]
    while k:
        lengths.append(k)
        k = table[k]
    lengths.sort()
    words = tuple(Word(pattern.letters[:length], pattern.m) for length in lengths)
    return OverlapSet(pattern, words)


def reverse(w: Word) -> Word:
    """The same letters read right to left."""
    return Word(w.letters[::-1], w.m)


def word_probability(w: Word, model: ProbModel) -> Fraction:
    """Exact probability of the word under independent rolls; 1 for the empty word."""
    if w.m != model.m:
        raise InvalidInputError(
            f"alphabet size mismatch: word has m={w.m}, model has m={model.m}"
        )
    p = Fraction(1)
    for a in w.letters:
        p *= model.probs[a - 1]
    return p


def is_factor(u: Word, w: Word) -> bool:
    """True iff u occurs as a consecutive subword of w (the empty word always does)."""
    k = len(u.letters)
    if k == 0:
        return True
    return any(w.letters[i:i + k] == u.letters for i in range(len(w.letters) - k + 1))
