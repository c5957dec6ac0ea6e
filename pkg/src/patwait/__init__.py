"""Exact moments of pattern waiting times in repeated rolls of a biased die.

Closed formulas built on the overlap set of the pattern, generating functions
from the cluster method, an independent automaton oracle, and a seeded
Monte Carlo simulator, all over exact rational arithmetic.
"""

__version__ = "0.1.0"

from .cluster import (
    RationalFunction,
    RationalSeries,
    avoiding_gf,
    series,
    stopping_gf,
    truncated_moment,
)
from .errors import InvalidInputError, UnreachablePatternError
from .moments import (
    MomentReport,
    SetPartition,
    coin_moment_partition,
    expected_time,
    extremal_expected,
    moment,
    moment_report,
    moment_run_rec,
    moment_run_tail_rec,
    occurrence_rate,
    set_partitions,
    variance,
)
from .sequences import (
    EulerianTable,
    ExtEulerianTable,
    c_coeff,
    eulerian,
    eulerian_ext,
    eulerian_ext_closed,
    fib_k,
    fib_k_bar,
    fubini,
    power_sum,
    tail_sum,
)
from .verify import (
    PatternAutomaton,
    SimConfig,
    SimReport,
    Xorshift64Star,
    build_automaton,
    brute_force_counts,
    exact_distribution,
    simulate,
    survival,
    truncation_for_tail,
)
from .words import (
    OverlapSet,
    ProbModel,
    Word,
    border_table,
    is_factor,
    overlaps,
    reverse,
    word_probability,
)
