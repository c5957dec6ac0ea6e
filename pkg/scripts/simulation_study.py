#!/usr/bin/env python3
"""Seeded Monte Carlo against the exact formulas for a handful of patterns.

Prints a z-score table; with a healthy implementation essentially everything
stays inside +-4."""

import argparse
from fractions import Fraction

from patwait import ProbModel, SimConfig, Word, simulate


CASES = [
    ("HH", Fraction(1, 2)),
    ("HT", Fraction(1, 2)),
    ("HHT", Fraction(1, 2)),
    ("HTHT", Fraction(1, 2)),
    ("HTT", Fraction(2, 3)),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=200000)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()

    print(f"{'pattern':8s} {'p(H)':6s} {'exact E':>10s} {'mean':>10s} {'stderr':>9s} "
          f"{'z(E)':>7s} {'z(E2)':>7s}")
    for text, p in CASES:
        word = Word(tuple(1 if c == "H" else 2 for c in text), 2)
        model = ProbModel((p, 1 - p))
        rep = simulate(word, model, SimConfig(trials=args.trials, seed=args.seed))
        print(f"{text:8s} {str(p):6s} {float(rep.exact[0]):10.4f} {rep.means[0]:10.4f} "
              f"{rep.stderrs[0]:9.5f} {rep.z_scores[0]:7.2f} {rep.z_scores[1]:7.2f}")


if __name__ == "__main__":
    main()
