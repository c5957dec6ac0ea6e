#!/usr/bin/env python3
"""Print the reference tables and moment rows this package is built around.

Everything here is recomputed from scratch; nothing is hard-coded."""

import argparse
from fractions import Fraction

from patwait import ProbModel, Word, eulerian, eulerian_ext, expected_time, moment


def print_eulerian(n_max):
    print(f"Eulerian triangle, rows 0..{n_max}")
    for n in range(n_max + 1):
        cells = [eulerian(n, i) for i in range(n + 1)]
        print("  " + " ".join(str(v) for v in cells if v or n == 0))
    print()


def print_extended(n_max, k_values):
    for k in k_values:
        print(f"Extended triangle at k={k}, rows 0..{n_max}")
        for n in range(n_max + 1):
            print("  " + " ".join(str(eulerian_ext(n, i, k)) for i in range(n + 1)))
        print()


def print_moment_rows(n_max):
    rows = [
        ("H", Fraction(1, 2)), ("HH", Fraction(1, 2)), ("HT", Fraction(1, 2)),
        ("H", Fraction(1, 3)), ("HH", Fraction(1, 3)),
        ("H", Fraction(1, 4)), ("H", Fraction(1, 5)),
    ]
    print(f"Coin moment rows E(Y^1)..E(Y^{n_max})")
    for text, p in rows:
        word = Word(tuple(1 if c == "H" else 2 for c in text), 2)
        model = ProbModel((p, 1 - p))
        values = [moment(word, model, n) for n in range(1, n_max + 1)]
        print(f"  S={text:3s} p={p}:  " + ", ".join(str(v) for v in values))
    print()


def print_monkey_demo():
    word = Word(tuple(ord(c) - 64 for c in "ABRACADABRA"), 26)
    value = expected_time(word, ProbModel.uniform(26))
    print(f"Expected keystrokes until ABRACADABRA (uniform A-Z): {value}")
    print(f"  = 26^11 + 26^4 + 26: {value == 26 ** 11 + 26 ** 4 + 26}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-max", type=int, default=7)
    parser.add_argument("--moment-max", type=int, default=6)
    args = parser.parse_args()
    print_eulerian(args.n_max)
    print_extended(min(args.n_max, 4), (0, 1, 2))
    print_moment_rows(args.moment_max)
    print_monkey_demo()


if __name__ == "__main__":
    main()
