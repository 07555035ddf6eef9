"""Base arithmetic functions as exact integer tables.

Everything downstream consumes these: the divisor count tau(n), the Mobius
and Liouville functions, perfect-power indicators, the Legendre symbol, and
the tau character (the Legendre symbol of the divisor count), all over
1..limit as exact 64-bit integers.

Heavy loops live in ``tauchar._kernels`` (compiled extension or numpy
fallback); this module owns validation, budgets, and the public types.
"""

from dataclasses import dataclass
from functools import cached_property
from math import isqrt

import numpy as np

from . import _kernels
from .errors import ArgumentError, OverflowHardError, ResourceLimitError
from .roots import integer_nth_root

# Hard cap on table sizes (entries). 1e8 int64 entries = 800 MB, the largest
# allocation this package will make by default.
MAX_SIEVE_ENTRIES = 10**8

_INT64_MIN = -(2**63)
_INT64_MAX = 2**63 - 1

# Miller-Rabin witnesses proven sufficient for every n < 3.3e24, far beyond
# any modulus this package accepts.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality for 64-bit-scale integers (Miller-Rabin)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_budget(limit: int, what: str = "sieve") -> None:
    """Raise ResourceLimitError when limit exceeds the table budget."""
    if limit > MAX_SIEVE_ENTRIES:
        raise ResourceLimitError(
            f"{what} limit {limit} exceeds the configured budget "
            f"MAX_SIEVE_ENTRIES={MAX_SIEVE_ENTRIES}"
        )


@dataclass(frozen=True, eq=False)
class CoeffSeries:
    """Exact integer values a(1..limit) of an arithmetic function.

    ``values`` is an int64 array of length limit + 1 whose entry 0 is unused
    (kept at 0) so that values[n] is a(n).  Immutable after construction.
    """

    limit: int
    values: np.ndarray

    def __post_init__(self):
        if self.limit < 1:
            raise ArgumentError(f"series limit must be >= 1, got {self.limit}")
        v = self.values
        if v.dtype != np.int64 or v.ndim != 1 or len(v) != self.limit + 1:
            raise ArgumentError(
                "values must be a 1-d int64 array of length limit + 1"
            )
        v.setflags(write=False)

    @classmethod
    def from_values(cls, values) -> "CoeffSeries":
        """Build from any integer sequence indexed 0..limit (entry 0 ignored)."""
        arr = np.asarray(values)
        if arr.dtype == object or not np.issubdtype(arr.dtype, np.integer):
            lst = [int(t) for t in arr]
            bad = [t for t in lst if not (_INT64_MIN <= t <= _INT64_MAX)]
            if bad:
                raise OverflowHardError(
                    f"coefficient {bad[0]} does not fit in signed 64 bits"
                )
            arr = np.array(lst, dtype=np.int64)
        else:
            arr = arr.astype(np.int64, copy=True)
        arr[0] = 0
        return cls(limit=len(arr) - 1, values=arr)

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.limit:
            raise IndexError(f"index {n} outside [1, {self.limit}]")
        return int(self.values[n])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CoeffSeries)
            and self.limit == other.limit
            and bool(np.array_equal(self.values, other.values))
        )

    def first_mismatch(self, other: "CoeffSeries") -> int | None:
        """Smallest n where the two series differ, or None if equal."""
        if self.limit != other.limit:
            raise ArgumentError("cannot compare series with different limits")
        diff = np.nonzero(self.values != other.values)[0]
        return int(diff[0]) if len(diff) else None

    def prefix_sum_at(self, x: int) -> int:
        """Sum of values[1..x] as an exact Python int."""
        if not 0 <= x <= self.limit:
            raise IndexError(f"prefix bound {x} outside [0, {self.limit}]")
        if x == 0:
            return 0
        part = self.values[1 : x + 1]
        peak = int(np.max(np.abs(part))) if len(part) else 0
        if peak * len(part) < 2**62:  # int64 accumulation provably safe
            return int(np.sum(part, dtype=np.int64))
        return int(sum(int(t) for t in part))


@dataclass(frozen=True)
class FactorSieve:
    """Smallest-prime-factor table for every n in [2, limit]."""

    limit: int
    spf: np.ndarray

    def smallest_factor(self, n: int) -> int:
        if not 2 <= n <= self.limit:
            raise ArgumentError(f"n={n} outside the sieve range [2, {self.limit}]")
        return int(self.spf[n])

    def factorize(self, n: int) -> list[tuple[int, int]]:
        """Prime factorization of n (2 <= n <= limit) as (p, exponent) pairs."""
        self.smallest_factor(n)  # range check
        out = []
        m = n
        while m > 1:
            p = int(self.spf[m])
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        return out


@dataclass(frozen=True)
class LegendreChar:
    """The Legendre symbol (. / q) for an odd prime modulus q."""

    q: int

    def __post_init__(self):
        if self.q < 3 or self.q % 2 == 0 or not is_prime(self.q):
            raise ArgumentError(f"modulus must be an odd prime, got {self.q}")

    @cached_property
    def table(self) -> np.ndarray:
        """Values (t/q) for t = 0..q-1 as int8, for vectorized lookups.

        Built by marking the nonzero squares mod q (q prime, so the symbol
        is 1 exactly on them); cross-checked against reciprocity in tests.
        """
        q = self.q
        vals = np.full(q, -1, dtype=np.int8)
        sq = np.arange(1, (q + 1) // 2, dtype=np.int64)
        vals[(sq * sq) % q] = 1
        vals[0] = 0
        vals[1] = 1
        vals.setflags(write=False)
        return vals

    def __call__(self, a: int) -> int:
        return _jacobi(a % self.q, self.q)


def _jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1, by binary quadratic reciprocity.

    Equals the Legendre symbol when n is an odd prime.
    """
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def legendre_symbol(a: int, char: LegendreChar | int) -> int:
    """(a/q) in {-1, 0, 1}: 0 iff q | a, else +-1 by quadratic residuosity."""
    if isinstance(char, int):
        char = LegendreChar(char)
    return char(a)


def build_factor_sieve(limit: int) -> FactorSieve:
    """Smallest-prime-factor table over [2, limit]."""
    if limit < 2:
        raise ArgumentError(f"factor sieve needs limit >= 2, got {limit}")
    check_budget(limit, "factor sieve")
    spf = _kernels.spf_table(limit)
    spf.setflags(write=False)
    return FactorSieve(limit=limit, spf=spf)


def _full_table(limit: int, key: str) -> np.ndarray:
    check_budget(limit)
    kw = {f"want_{key}": True}
    return _kernels.full_tables(limit, **kw)[key]


def divisor_count_sieve(limit: int) -> CoeffSeries:
    """tau(n) = number of divisors of n, for n = 1..limit."""
    if limit < 1:
        raise ArgumentError(f"limit must be >= 1, got {limit}")
    return CoeffSeries(limit, _full_table(limit, "tau").astype(np.int64))


def mobius_sieve(limit: int) -> CoeffSeries:
    """mu(n) for n = 1..limit."""
    if limit < 1:
        raise ArgumentError(f"limit must be >= 1, got {limit}")
    return CoeffSeries(limit, _full_table(limit, "mu").astype(np.int64))


def liouville_sieve(limit: int) -> CoeffSeries:
    """Liouville (-1)**Omega(n) for n = 1..limit."""
    if limit < 1:
        raise ArgumentError(f"limit must be >= 1, got {limit}")
    return CoeffSeries(limit, _full_table(limit, "liou").astype(np.int64))


def power_indicator_series(r: int, limit: int) -> CoeffSeries:
    """Indicator of perfect r-th powers (Dirichlet series zeta(r*s)), r >= 2."""
    if r < 2:
        raise ArgumentError(f"power order must be >= 2, got {r}")
    if limit < 1:
        raise ArgumentError(f"limit must be >= 1, got {limit}")
    check_budget(limit)
    values = np.zeros(limit + 1, dtype=np.int64)
    top = integer_nth_root(limit, r)
    values[np.arange(1, top + 1, dtype=np.int64) ** r] = 1
    return CoeffSeries(limit, values)


def ones_series(limit: int) -> CoeffSeries:
    """The constant function 1 (Dirichlet series zeta(s))."""
    if limit < 1:
        raise ArgumentError(f"limit must be >= 1, got {limit}")
    check_budget(limit)
    values = np.ones(limit + 1, dtype=np.int64)
    values[0] = 0
    return CoeffSeries(limit, values)


def identity_series(limit: int) -> CoeffSeries:
    """The convolution identity e (1 at n=1, else 0)."""
    if limit < 1:
        raise ArgumentError(f"limit must be >= 1, got {limit}")
    values = np.zeros(limit + 1, dtype=np.int64)
    values[1] = 1
    return CoeffSeries(limit, values)


def tau_char_sieve(char: LegendreChar | int, limit: int) -> CoeffSeries:
    """The tau character: n -> Legendre symbol (tau(n) / q), values in {-1,0,1}.

    Multiplicative because tau is multiplicative and the symbol is completely
    multiplicative.
    """
    if isinstance(char, int):
        char = LegendreChar(char)
    if limit < 1:
        raise ArgumentError(f"limit must be >= 1, got {limit}")
    tau = _full_table(limit, "tau")
    values = char.table[tau % char.q].astype(np.int64)
    values[0] = 0
    return CoeffSeries(limit, values)


def tau_char_block(char: LegendreChar, lo: int, hi: int, primes: np.ndarray) -> np.ndarray:
    """Tau-character values for n in [lo, hi) as int8 (segmented workhorse).

    ``primes`` must contain every prime p with p*p < hi; see
    ``_kernels.factor_block``.
    """
    tau = _kernels.factor_block(lo, hi, primes, want_tau=True)["tau"]
    return char.table[tau % char.q]


def primes_up_to(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array (re-export from the kernels)."""
    check_budget(limit, "prime sieve")
    return _kernels.primes_up_to(limit)


def segment_primes(hi: int) -> np.ndarray:
    """Primes sufficient to factor any block with upper end hi: p <= sqrt(hi-1)."""
    return _kernels.primes_up_to(isqrt(max(hi - 1, 1)))
