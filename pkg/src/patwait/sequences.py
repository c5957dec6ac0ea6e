"""Integer sequences and exact power sums behind the waiting-time identities.

Covers the Eulerian triangle, its one-parameter extension, truncated and tail
power sums, Fubini (ordered Bell) numbers, the coefficient array of the
truncated half-power sums, and order-k Fibonacci numbers with their
partial-sum variant.  Everything is arbitrary-precision; the power sums are
exact rationals.  Triangle tables memoize rows and grow on demand under a
lock, so reads are safe to share across threads.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import comb

from .errors import InvalidInputError


class EulerianTable:
    """Triangle e[n][i] with e[0][0] = 1, zero for i <= 0 (except n = i = 0)
    or i > n, and e[n][i] = i*e[n-1][i] + (n-i+1)*e[n-1][i-1] otherwise."""

    def __init__(self, n_max: int = 12):
        self._rows: list[list[int]] = [[1]]
        self._lock = threading.Lock()
        self.grow(n_max)

    def grow(self, n_max: int) -> None:
        with self._lock:
            while len(self._rows) <= n_max:
                n = len(self._rows)
                prev = self._rows[-1]
                row = [0] * (n + 1)
                for i in range(1, n + 1):
                    up = prev[i] if i < n else 0
                    row[i] = i * up + (n - i + 1) * prev[i - 1]
                self._rows.append(row)

    def value(self, n: int, i: int) -> int:
        if n < 0:
            raise InvalidInputError("eulerian: n must be nonnegative")
        if i < 0 or i > n or (i == 0 and n > 0):
            return 0
        self.grow(n)
        return self._rows[n][i]


class ExtEulerianTable:
    """One-parameter extension e^k[n][i] with e^k[0][0] = 1, zero for i < 0 or
    i > n, and e^k[n][i] = (k+i+1)*e^k[n-1][i] + (n-k-i)*e^k[n-1][i-1].

    Special cases: e^k[n][0] = (1+k)^n, e^k[i][i] = (-k)^i, and k = 0 recovers
    the classical triangle shifted by one column."""

    def __init__(self, k: int, n_max: int = 12):
        if k < 0:
            raise InvalidInputError("extended eulerian: k must be nonnegative")
        self.k = k
        self._rows: list[list[int]] = [[1]]
        self._lock = threading.Lock()
        self.grow(n_max)

    def grow(self, n_max: int) -> None:
        k = self.k
        with self._lock:
            while len(self._rows) <= n_max:
                n = len(self._rows)
                prev = self._rows[-1]
                row = [0] * (n + 1)
                for i in range(n + 1):
                    up = prev[i] if i < n else 0
                    upleft = prev[i - 1] if i >= 1 else 0
                    row[i] = (k + i + 1) * up + (n - k - i) * upleft
                self._rows.append(row)

    def value(self, n: int, i: int) -> int:
        if n < 0:
            raise InvalidInputError("extended eulerian: n must be nonnegative")
        if i < 0 or i > n:
            return 0
        self.grow(n)
        return self._rows[n][i]


_EULERIAN = EulerianTable()
_EXT_TABLES: dict[int, ExtEulerianTable] = {}
_EXT_LOCK = threading.Lock()


def eulerian(n: int, i: int) -> int:
    """Eulerian number e_{n,i} (OEIS A008292 indexing with i from 1 to n)."""
    return _EULERIAN.value(n, i)


def eulerian_ext(n: int, i: int, k: int) -> int:
    """Extended Eulerian number e^k_{n,i}, by the defining recurrence."""
    if k < 0:
        raise InvalidInputError("extended eulerian: k must be nonnegative")
    with _EXT_LOCK:
        table = _EXT_TABLES.get(k)
        if table is None:
            table = _EXT_TABLES[k] = ExtEulerianTable(k)
    return table.value(n, i)


def eulerian_ext_closed(n: int, i: int, k: int) -> int:
    """Alternating-sum closed form for e^k_{n,i}; equals the recurrence value
    everywhere (and vanishes for i > n, since it is an (n+1)-st difference of
    a degree-n polynomial)."""
    if n < 0 or k < 0 or i < 0:
        raise InvalidInputError("extended eulerian closed form: n, i, k must be nonnegative")
    return sum((-1) ** j * comb(n + 1, j) * (k + i + 1 - j) ** n for j in range(i + 1))


def power_sum(n: int, k: int, x) -> Fraction:
    """Truncated power sum: d^n x^d summed over d = 0..k, exactly.

    Evaluated by direct summation and, for x != 1, also through the split
    Eulerian form; the two routes must agree."""
    if n < 0 or k < 0:
        raise InvalidInputError("power_sum: n and k must be nonnegative")
    x = Fraction(x)
    direct = sum((d ** n) * x ** d for d in range(k + 1))
    if x != 1:
        numerator = sum(
            eulerian(n, i) * x ** i - eulerian_ext(n, i, k) * x ** (k + i + 1)
            for i in range(n + 1)
        )
        split = numerator / (1 - x) ** (n + 1)
        assert split == direct, f"power-sum identity failed at n={n}, k={k}, x={x}"
    return direct


def tail_sum(n: int, k: int, x) -> Fraction:
    """Tail power sum: d^n x^d summed over d > k, via the extended-Eulerian
    closed form.  Converges only for |x| < 1."""
    if n < 0 or k < 0:
        raise InvalidInputError("tail_sum: n and k must be nonnegative")
    x = Fraction(x)
    if abs(x) >= 1:
        raise InvalidInputError(f"tail_sum diverges for |x| >= 1, got x={x}")
    numerator = sum(eulerian_ext(n, i, k) * x ** (k + i + 1) for i in range(n + 1))
    return numerator / (1 - x) ** (n + 1)


def fubini(n: int) -> int:
    """Ordered Bell number b_n (OEIS A000670), as the dyadically weighted
    Eulerian row sum."""
    if n < 0:
        raise InvalidInputError("fubini: n must be nonnegative")
    return sum(eulerian(n, i) * 2 ** (n - i) for i in range(n + 1))


def c_coeff(n: int, ell: int) -> int:
    """Coefficient of k^(n-ell) in the polynomial part of the truncated sum of
    d^n / 2^d, namely binom(n,ell) * sum_i sum_j (-1)^j binom(n+1,j) (i+1-j)^ell 2^(n-i).

    The constant coefficient c(n, n) equals 2*fubini(n) for n >= 1 (and 1 for
    n = 0); the sub-diagonal triangle is conjectured to match OEIS A202687."""
    if n < 0 or ell < 0:
        raise InvalidInputError("c_coeff: n and ell must be nonnegative")
    if ell > n:
        raise InvalidInputError(f"c_coeff: need ell <= n, got ell={ell}, n={n}")
    total = 0
    for i in range(n + 1):
        inner = sum((-1) ** j * comb(n + 1, j) * (i + 1 - j) ** ell for j in range(i + 1))
        total += inner * 2 ** (n - i)
    return comb(n, ell) * total


def fib_k(i: int, k: int) -> int:
    """Order-k Fibonacci number: 0 below index k-1, then 1, then the sum of
    the previous k values.  k = 2 is the classical sequence (starting 0, 1)."""
    if k < 1:
        raise InvalidInputError("fib_k: order k must be at least 1")
    if i < k - 1:
        return 0
    vals = [0] * max(i + 1, k)
    vals[k - 1] = 1
    for j in range(k, i + 1):
        vals[j] = sum(vals[j - k:j])
    return vals[i]


def fib_k_bar(i: int, k: int) -> int:
    """Partial sums of the order-k Fibonacci numbers: 0 below index k-1, 1 at
    k-1, then the sum of the previous k values plus 1.  Equivalently satisfies
    f(i) = 2 f(i-1) - f(i-k-1)."""
    if k < 1:
        raise InvalidInputError("fib_k_bar: order k must be at least 1")
    if i < k - 1:
        return 0
    vals = [0] * max(i + 1, k)
    vals[k - 1] = 1
    for j in range(k, i + 1):
        vals[j] = sum(vals[j - k:j]) + 1
    return vals[i]
