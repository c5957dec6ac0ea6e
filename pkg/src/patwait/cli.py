"""Command-line interface: every computation as a subcommand, TSV or JSON out.

Rationals are serialized as "numerator/denominator" strings in JSON (plus a
decimal convenience field rounded to 12 significant digits); plain output
drops the "/1" on integers.  Exit codes: 0 success, 2 invalid input, 3
unreachable pattern (rendered as "infinite" rather than a number).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from math import comb

from . import __version__
from .cluster import avoiding_gf, series, stopping_gf
from .errors import InvalidInputError, UnreachablePatternError
from .moments import (
    coin_moment_partition,
    expected_time,
    moment,
    moment_report,
    moment_run_rec,
    moment_run_tail_rec,
    occurrence_rate,
    variance,
)
from .sequences import (
    c_coeff,
    eulerian,
    eulerian_ext,
    eulerian_ext_closed,
    fib_k,
    fib_k_bar,
    fubini,
)
from .verify import SimConfig, exact_distribution, simulate
from .words import ProbModel, Word, overlaps, reverse

TABLE_NAMES = ("eulerian", "eulerian-ext")
SEQUENCE_NAMES = ("fubini", "fib", "fib-bar", "c-row")


# ---------------------------------------------------------------------------
# parsing and formatting helpers


def parse_alphabet(spec: str) -> dict[str, int]:
    """'HT' maps H->1, T->2; 'A-Z' expands a contiguous character range."""
    if len(spec) == 3 and spec[1] == "-":
        lo, hi = spec[0], spec[2]
        if ord(hi) <= ord(lo):
            raise InvalidInputError(f"bad alphabet range {spec!r}; try something like A-Z")
        chars = [chr(c) for c in range(ord(lo), ord(hi) + 1)]
    else:
        chars = list(spec)
        if len(set(chars)) != len(chars):
            raise InvalidInputError(f"alphabet letters must be distinct, got {spec!r}")
        if not chars:
            raise InvalidInputError("alphabet must not be empty")
    return {ch: i + 1 for i, ch in enumerate(chars)}


def parse_pattern(text: str, mapping: dict[str, int] | None, m: int | None) -> Word:
    if mapping is not None:
        letters = []
        for ch in text:
            if ch not in mapping:
                raise InvalidInputError(
                    f"--pattern: letter {ch!r} is not in the declared alphabet"
                )
            letters.append(mapping[ch])
        return Word(tuple(letters), len(mapping))
    if m is None:
        raise InvalidInputError("integer patterns need --m (or declare --alphabet)")
    try:
        letters = tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise InvalidInputError(
            f'--pattern: expected comma-separated integers like "1,3,2,1,1", got {text!r}'
        ) from None
    return Word(letters, m)


def parse_fraction(tok: str) -> Fraction:
    try:
        return Fraction(tok.strip())
    except (ValueError, ZeroDivisionError):
        raise InvalidInputError(f'bad rational {tok!r}; write it like "1/2"') from None


def parse_probs(text: str, m: int) -> ProbModel:
    parts = [parse_fraction(tok) for tok in text.split(",")]
    if len(parts) != m:
        raise InvalidInputError(f"--probs: expected {m} probabilities, got {len(parts)}")
    return ProbModel(tuple(parts))


def fmt_rat(r: Fraction) -> str:
    return f"{r.numerator}/{r.denominator}"


def fmt_plain(r: Fraction) -> str:
    return str(r.numerator) if r.denominator == 1 else fmt_rat(r)


def fmt_decimal(r: Fraction, digits: int = 12) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(r.numerator) / Decimal(r.denominator))


def rational_json(r: Fraction) -> dict:
    return {"value": fmt_rat(r), "decimal": fmt_decimal(r)}


# ---------------------------------------------------------------------------
# invocation record and dispatch


@dataclass
class Invocation:
    subcommand: str
    fmt: str = "tsv"
    pattern: Word | None = None
    pattern2: Word | None = None
    model: ProbModel | None = None
    pattern_text: str = ""
    pattern2_text: str = ""
    n: int = 0
    k: int = 0
    ell: int = 1
    order: int = 0
    count: int = 0
    trials: int = 0
    seed: int = 0
    cap: int | None = None
    rolls: int = 0
    table: str = ""
    sequence: str = ""
    kind: str = ""
    counts: bool = False
    extra: dict = field(default_factory=dict)


def _word_options(sp, with_probs=True):
    sp.add_argument("--pattern", required=True,
                    help='pattern: letters over --alphabet ("ABRA") or integers with --m ("1,3,2,1,1")')
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--alphabet", help='letter alphabet, e.g. "HT" or "A-Z"')
    group.add_argument("--m", type=int, help="alphabet size for comma-separated integer patterns")
    if with_probs:
        pg = sp.add_mutually_exclusive_group(required=True)
        pg.add_argument("--uniform", action="store_true", help="all faces equally likely")
        pg.add_argument("--probs", help='face probabilities summing to 1, e.g. "1/2,1/4,1/4"')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="patwait",
        description="Exact moments of the waiting time for a pattern in repeated die rolls.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("expected", help="expected waiting time")
    _word_options(sp)
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("moments", help="moments E(Y^1)..E(Y^n) and variance")
    _word_options(sp)
    sp.add_argument("--n", type=int, default=2, help="highest moment order (default 2)")
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("variance", help="variance of the waiting time")
    _word_options(sp)
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("gf", help="generating-function coefficients")
    _word_options(sp)
    sp.add_argument("--order", type=int, default=10, help="truncation order (default 10)")
    sp.add_argument("--kind", choices=("avoiding", "stopping"), default="avoiding")
    sp.add_argument("--counts", action="store_true",
                    help="multiply by m^d (uniform models only) and print integers")

    sp = sub.add_parser("distribution", help="P(Y=d) from the automaton oracle")
    _word_options(sp)
    sp.add_argument("--order", type=int, default=20)
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("table", help="emit a number triangle as TSV")
    sp.add_argument("name", choices=TABLE_NAMES)
    sp.add_argument("--n", type=int, default=7, help="largest row index")
    sp.add_argument("--k", type=int, default=0, help="parameter for eulerian-ext")

    sp = sub.add_parser("sequence", help="emit a named sequence as TSV")
    sp.add_argument("name", choices=SEQUENCE_NAMES)
    sp.add_argument("--count", type=int, default=8, help="number of terms")
    sp.add_argument("--k", type=int, default=2, help="order for fib / fib-bar")
    sp.add_argument("--n", type=int, default=4, help="row index for c-row")

    sp = sub.add_parser("simulate", help="seeded Monte Carlo vs exact moments (JSON)")
    _word_options(sp)
    sp.add_argument("--trials", type=int, default=100000)
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--cap", type=int, default=None, help="max rolls per episode")

    sp = sub.add_parser("compare", help="which of two patterns occurs more often")
    _word_options(sp)
    sp.add_argument("--pattern2", required=True, help="second pattern (same alphabet)")
    sp.add_argument("--rolls", type=int, default=100)
    sp.add_argument("--json", action="store_true")

    sub.add_parser("check", help="run the identity self-check suites")
    return parser


def _invocation(args: argparse.Namespace) -> Invocation:
    inv = Invocation(subcommand=args.cmd)
    if hasattr(args, "json") and args.json:
        inv.fmt = "json"
    if args.cmd == "simulate":
        inv.fmt = "json"
    if hasattr(args, "pattern"):
        mapping = parse_alphabet(args.alphabet) if args.alphabet else None
        m = args.m if mapping is None else len(mapping)
        inv.pattern = parse_pattern(args.pattern, mapping, args.m)
        inv.pattern_text = args.pattern
        if getattr(args, "pattern2", None) is not None:
            inv.pattern2 = parse_pattern(args.pattern2, mapping, args.m)
            inv.pattern2_text = args.pattern2
        if hasattr(args, "uniform"):
            inv.model = ProbModel.uniform(m) if args.uniform else parse_probs(args.probs, m)
    for name in ("n", "k", "ell", "order", "count", "trials", "seed", "cap", "rolls"):
        if hasattr(args, name):
            setattr(inv, name, getattr(args, name))
    if args.cmd == "table":
        inv.table = args.name
    if args.cmd == "sequence":
        inv.sequence = args.name
    if hasattr(args, "kind"):
        inv.kind = args.kind
    if hasattr(args, "counts"):
        inv.counts = args.counts
    return inv


def _pattern_json(inv: Invocation) -> dict:
    return {
        "pattern": inv.pattern_text,
        "letters": list(inv.pattern.letters),
        "m": inv.pattern.m,
        "probs": [fmt_rat(p) for p in inv.model.probs],
    }


def _cmd_expected(inv: Invocation) -> int:
    value = expected_time(inv.pattern, inv.model)
    if inv.fmt == "json":
        out = _pattern_json(inv)
        out["expected"] = fmt_rat(value)
        out["decimal"] = fmt_decimal(value)
        print(json.dumps(out))
    else:
        print(fmt_plain(value))
    return 0


def _cmd_moments(inv: Invocation) -> int:
    report = moment_report(inv.pattern, inv.model, inv.n)
    if inv.fmt == "json":
        out = _pattern_json(inv)
        out["n_max"] = report.n_max
        out["moments"] = [
            {"n": t, **rational_json(v)} for t, v in enumerate(report.moments, start=1)
        ]
        out["variance"] = rational_json(report.variance)
        print(json.dumps(out))
    else:
        for t, v in enumerate(report.moments, start=1):
            print(f"{t}\t{fmt_plain(v)}")
    return 0


def _cmd_variance(inv: Invocation) -> int:
    value = variance(inv.pattern, inv.model)
    if inv.fmt == "json":
        out = _pattern_json(inv)
        out["variance"] = rational_json(value)
        print(json.dumps(out))
    else:
        print(fmt_plain(value))
    return 0


def _cmd_gf(inv: Invocation) -> int:
    build = avoiding_gf if inv.kind == "avoiding" else stopping_gf
    ser = series(build(inv.pattern, inv.model), inv.order)
    if inv.counts:
        if len(set(inv.model.probs)) != 1:
            raise InvalidInputError("--counts needs a uniform model")
        m = inv.model.m
        for d, c in enumerate(ser.coeffs):
            scaled = c * m ** d
            if scaled.denominator != 1:
                raise InvalidInputError(f"coefficient at d={d} is not an integer count")
            print(scaled.numerator)
    else:
        for c in ser.coeffs:
            print(fmt_rat(c))
    return 0


def _cmd_distribution(inv: Invocation) -> int:
    ser = exact_distribution(inv.pattern, inv.model, inv.order)
    if inv.fmt == "json":
        out = _pattern_json(inv)
        out["distribution"] = [
            {"d": d, **rational_json(c)} for d, c in enumerate(ser.coeffs)
        ]
        print(json.dumps(out))
    else:
        for d, c in enumerate(ser.coeffs):
            print(f"{d}\t{fmt_rat(c)}")
    return 0


def _cmd_table(inv: Invocation) -> int:
    n_max = inv.n
    if n_max < 0:
        raise InvalidInputError("--n must be nonnegative")
    header = "n\\i\t" + "\t".join(str(i) for i in range(n_max + 1))
    print(header)
    for n in range(n_max + 1):
        if inv.table == "eulerian":
            cells = [eulerian(n, i) for i in range(n + 1)]
            row = [str(v) if v != 0 or (n == 0 and i == 0) else ""
                   for i, v in enumerate(cells)]
        else:
            row = [str(eulerian_ext(n, i, inv.k)) for i in range(n + 1)]
        print(f"{n}\t" + "\t".join(row))
    return 0


def _cmd_sequence(inv: Invocation) -> int:
    if inv.sequence == "fubini":
        for n in range(inv.count):
            print(f"{n}\t{fubini(n)}")
    elif inv.sequence == "fib":
        for i in range(inv.count):
            print(f"{i}\t{fib_k(i, inv.k)}")
    elif inv.sequence == "fib-bar":
        for i in range(inv.count):
            print(f"{i}\t{fib_k_bar(i, inv.k)}")
    else:  # c-row
        for ell in range(inv.n + 1):
            print(f"{ell}\t{c_coeff(inv.n, ell)}")
    return 0


def _cmd_simulate(inv: Invocation) -> int:
    cfg = SimConfig(trials=inv.trials, seed=inv.seed, cap=inv.cap)
    rep = simulate(inv.pattern, inv.model, cfg)
    out = _pattern_json(inv)
    out.update({
        "trials": rep.trials,
        "seed": rep.seed,
        "cap": rep.cap,
        "hits": rep.hits,
        "capped": rep.capped,
        "capped_excluded": rep.capped_excluded,
        "empirical": [
            {
                "n": t,
                "mean": rep.means[t - 1],
                "stderr": rep.stderrs[t - 1],
                "exact": fmt_rat(rep.exact[t - 1]),
                "exact_decimal": fmt_decimal(rep.exact[t - 1]),
                "z": rep.z_scores[t - 1],
            }
            for t in (1, 2, 3, 4)
        ],
    })
    print(json.dumps(out))
    return 0


def compare(w1: Word, w2: Word, model: ProbModel, rolls: int) -> dict:
    """Expected times, overlap counts, and occurrence rates for two patterns,
    plus which is predicted to occur more often (ties reported as 'tie')."""
    e1, e2 = expected_time(w1, model), expected_time(w2, model)
    report = {
        "first": {
            "expected": e1,
            "overlap_count": len(overlaps(w1)),
            "rate": occurrence_rate(w1, model, rolls),
        },
        "second": {
            "expected": e2,
            "overlap_count": len(overlaps(w2)),
            "rate": occurrence_rate(w2, model, rolls),
        },
        "rolls": rolls,
        "winner": "tie" if e1 == e2 else ("first" if e1 < e2 else "second"),
    }
    return report


def _cmd_compare(inv: Invocation) -> int:
    rep = compare(inv.pattern, inv.pattern2, inv.model, inv.rolls)
    names = {"first": inv.pattern_text, "second": inv.pattern2_text, "tie": "tie"}
    if inv.fmt == "json":
        out = {
            "rolls": rep["rolls"],
            "probs": [fmt_rat(p) for p in inv.model.probs],
            "patterns": [
                {
                    "pattern": names[key],
                    "expected": fmt_rat(rep[key]["expected"]),
                    "overlap_count": rep[key]["overlap_count"],
                    "rate": fmt_rat(rep[key]["rate"]),
                    "rate_decimal": fmt_decimal(rep[key]["rate"]),
                }
                for key in ("first", "second")
            ],
            "predicted_more_frequent": names[rep["winner"]],
        }
        print(json.dumps(out))
    else:
        for key in ("first", "second"):
            r = rep[key]
            print(f"{names[key]}\t{fmt_plain(r['expected'])}\t{r['overlap_count']}\t{fmt_plain(r['rate'])}")
        print(f"predicted\t{names[rep['winner']]}")
    return 0


# ---------------------------------------------------------------------------
# self-check suites (reduced ranges; the pytest suite runs the full ones)


def _check_worpitzky() -> bool:
    return all(
        sum(eulerian_ext(n, i, k) * comb(n + j - i, n) for i in range(n + 1)) == (j + k + 1) ** n
        for n in range(7) for k in range(7) for j in range(7)
    )


def _check_carlitz_split() -> bool:
    from .sequences import power_sum  # asserts both routes internally
    xs = (Fraction(1, 2), Fraction(1, 3), Fraction(3, 2))
    try:
        for n in range(6):
            for k in range(7):
                for x in xs:
                    power_sum(n, k, x)
    except AssertionError:
        return False
    return True


def _check_closed_form() -> bool:
    return all(
        eulerian_ext(n, i, k) == eulerian_ext_closed(n, i, k)
        for n in range(7) for i in range(7) for k in range(7)
    )


def _check_fubini() -> bool:
    expected = [1, 1, 3, 13, 75, 541, 4683, 47293]
    return [fubini(n) for n in range(8)] == expected and all(
        c_coeff(n, n) == 2 * fubini(n) for n in range(1, 8)
    )


def _check_triple_agreement() -> bool:
    for k in range(1, 5):
        for p in (Fraction(1, 2), Fraction(2, 3)):
            model = ProbModel((p, 1 - p))
            run = Word((1,) * k, 2)
            run_tail = Word((1,) * k + (2,), 2)
            for n in range(1, 5):
                a = moment(run, model, n)
                if a != moment_run_rec(k, p, n) or a != coin_moment_partition("run", k, 1, p, n):
                    return False
                b = moment(run_tail, model, n)
                if b != moment_run_tail_rec(k, p, n) or b != coin_moment_partition("run-tail", k, 1, p, n):
                    return False
    return True


def _check_oracle_equivalence() -> bool:
    from itertools import product as iproduct
    models = {2: (ProbModel.uniform(2), ProbModel((Fraction(2, 3), Fraction(1, 3)))),
              3: (ProbModel.uniform(3),)}
    for m, model_set in models.items():
        max_len = 4 if m == 2 else 3
        for length in range(1, max_len + 1):
            for letters in iproduct(range(1, m + 1), repeat=length):
                w = Word(letters, m)
                for model in model_set:
                    dp = exact_distribution(w, model, 30)
                    gf = series(stopping_gf(w, model), 30)
                    if dp.coeffs != gf.coeffs:
                        return False
    return True


def _check_reversal() -> bool:
    model = ProbModel((Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)))
    for letters in ((1, 2, 1, 1), (1, 3, 2, 1, 1), (2, 2, 3)):
        w = Word(letters, 3)
        for n in range(1, 4):
            if moment(w, model, n) != moment(reverse(w), model, n):
                return False
    return True


CHECK_SUITES = (
    ("worpitzky", _check_worpitzky),
    ("carlitz-split", _check_carlitz_split),
    ("ext-eulerian-closed-form", _check_closed_form),
    ("fubini", _check_fubini),
    ("triple-agreement", _check_triple_agreement),
    ("oracle-equivalence", _check_oracle_equivalence),
    ("reversal", _check_reversal),
)


def _cmd_check(inv: Invocation) -> int:
    failed = 0
    for name, fn in CHECK_SUITES:
        ok = fn()
        print(f"{'ok' if ok else 'FAIL'} {name}")
        if not ok:
            failed += 1
    return 1 if failed else 0


_HANDLERS = {
    "expected": _cmd_expected,
    "moments": _cmd_moments,
    "variance": _cmd_variance,
    "gf": _cmd_gf,
    "distribution": _cmd_distribution,
    "table": _cmd_table,
    "sequence": _cmd_sequence,
    "simulate": _cmd_simulate,
    "compare": _cmd_compare,
    "check": _cmd_check,
}


def run(inv: Invocation) -> int:
    """Dispatch a parsed invocation; exceptions map to exit codes in main()."""
    return _HANDLERS[inv.subcommand](inv)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse handles --help/--version/usage errors
        code = exc.code
        return code if isinstance(code, int) else 2
    try:
        inv = _invocation(args)
        return run(inv)
    except UnreachablePatternError as exc:
        if getattr(args, "json", False) or args.cmd == "simulate":
            print(json.dumps({"expected": "infinite", "error": str(exc)}))
        else:
            print("infinite")
            print(f"error: {exc}", file=sys.stderr)
        return 3
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
