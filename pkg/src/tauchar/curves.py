"""Counting integers near the curve X/n^s and short-interval decompositions.

The central counter R(f, N, delta) is the number of integers n in a window
with distance from f(n) = X/n^s to the nearest integer strictly below delta.
Two routes exist:

* exact: when X^2 and delta^2 are rational and 2s is an integer, the
  predicate ||sqrt(u) - k|| < delta (u = X^2/n^{2s}) reduces to sign-safe
  rational inequalities — (sqrt(u) - k)^2 < delta^2 iff 2k sqrt(u) >
  u + k^2 - delta^2, squared once more when the right side is positive.
  No floating point, no misclassification.
* general: high-precision evaluation with a guard band of 1e-12 around
  delta; any point landing inside the band raises a hard error listing the
  offending n rather than guessing.

The short-interval machinery specializes to the fifth-power curve
f(n) = sqrt(x/n^5): the window sum of the fifth-power-convolution over
(x, x+y] equals an alternating sum of fifth-root floors at the endpoints,
and is bounded by the exact double count of pairs (d, n) with
x < d^2 n^5 <= x+y.  The scan splits the n-range into dyadic windows and
reports exact counts against three derivative-test bound shapes with
implied constant 1 (never asserted: the true constants are unknown).
"""

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, log

import mpmath as mp
import numpy as np

from . import _kernels
from .errors import ArgumentError, TaucharError, UndecidablePointError
from .roots import floor_rational_root, floor_root_grid
from .sieves import check_budget, mobius_sieve, segment_primes

GUARD_BAND = 1e-12
GENERAL_ROUTE_DPS = 50


def _to_fraction(v) -> Fraction:
    """Exact conversion; floats convert by their exact binary value."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        if v != v or v in (float("inf"), float("-inf")):
            raise ArgumentError(f"non-finite value {v}")
        return Fraction(v)
    raise ArgumentError(f"expected int, float or Fraction, got {type(v).__name__}")


@dataclass(frozen=True)
class CurveConfig:
    """Window and threshold for counting integers near X/n^s.

    ``X`` and ``delta`` are the working float values; ``X_sq`` and
    ``delta_sq`` optionally carry exact squares enabling the exact route
    (requires 2s integral).  The window is the closed range [N, 2N].
    """

    X: float
    s: Fraction
    N: int
    delta: float
    X_sq: Fraction | None = None
    delta_sq: Fraction | None = None

    def __post_init__(self):
        if self.N < 1:
            raise ArgumentError(f"window base must be >= 1, got {self.N}")
        if not 0.0 < self.delta < 0.25:
            raise ArgumentError(f"delta must lie in (0, 1/4), got {self.delta}")
        if not isinstance(self.s, Fraction):
            object.__setattr__(self, "s", Fraction(self.s))
        if self.s <= 0:
            raise ArgumentError(f"exponent must be positive, got {self.s}")
        if not self.X > 0:
            raise ArgumentError(f"X must be positive, got {self.X}")
        if self.X_sq is not None:
            if self.X_sq <= 0:
                raise ArgumentError("X_sq must be positive")
            if abs(float(self.X_sq) - self.X * self.X) > 1e-6 * max(
                1.0, self.X * self.X
            ):
                raise ArgumentError("X and X_sq disagree")
        if self.delta_sq is not None:
            if not Fraction(0) < self.delta_sq < Fraction(1, 16):
                raise ArgumentError("delta_sq must lie in (0, 1/16)")
            if abs(float(self.delta_sq) - self.delta * self.delta) > 1e-6:
                raise ArgumentError("delta and delta_sq disagree")

    @classmethod
    def from_exact(cls, X_sq, s, N: int, delta_sq) -> "CurveConfig":
        """Exact-route config; float fields are derived for display."""
        X_sq = _to_fraction(X_sq)
        delta_sq = _to_fraction(delta_sq)
        return cls(
            X=float(X_sq) ** 0.5,
            s=Fraction(s),
            N=int(N),
            delta=float(delta_sq) ** 0.5,
            X_sq=X_sq,
            delta_sq=delta_sq,
        )

    @property
    def exact_capable(self) -> bool:
        return (
            self.X_sq is not None
            and self.delta_sq is not None
            and (2 * self.s).denominator == 1
        )


def _floor_frac(u: Fraction) -> int:
    return u.numerator // u.denominator


def _floor_root(u: Fraction, k: int) -> int:
    return floor_rational_root(u.numerator, u.denominator, k)


def _near_integer_sq(u: Fraction, delta_sq: Fraction) -> bool:
    """Exact predicate: distance from sqrt(u) to nearest integer < sqrt(delta_sq).

    For k in {floor(sqrt(u)), floor(sqrt(u)) + 1} (one of which is nearest):
    (sqrt(u) - k)^2 < dsq  iff  2k sqrt(u) > u + k^2 - dsq, and when the
    right side is nonnegative both sides square to 4k^2 u > (u + k^2 - dsq)^2.
    """
    k0 = isqrt(_floor_frac(u))
    for k in (k0, k0 + 1):
        rhs = u + k * k - delta_sq
        if rhs < 0:
            return True
        if k and 4 * k * k * u > rhs * rhs:
            return True
    return False


def _count_exact(cfg: CurveConfig, n_lo: int, n_hi: int) -> int:
    two_s = int(2 * cfg.s)
    cnt = 0
    for n in range(n_lo, n_hi + 1):
        u = cfg.X_sq / Fraction(n**two_s)
        if _near_integer_sq(u, cfg.delta_sq):
            cnt += 1
    return cnt


def _count_general(cfg: CurveConfig, n_lo: int, n_hi: int) -> int:
    cnt = 0
    undecidable: list[int] = []
    with mp.workdps(GENERAL_ROUTE_DPS):
        X = mp.mpf(cfg.X)
        delta = mp.mpf(cfg.delta)
        guard = mp.mpf(GUARD_BAND)
        s = mp.mpf(cfg.s.numerator) / cfg.s.denominator
        for n in range(n_lo, n_hi + 1):
            t = X * mp.power(n, -s)
            dist = abs(t - mp.nint(t))
            if abs(dist - delta) <= guard:
                undecidable.append(n)
            elif dist < delta:
                cnt += 1
    if undecidable:
        raise UndecidablePointError(
            f"distance within {GUARD_BAND:g} of the threshold at "
            f"{len(undecidable)} point(s); supply exact payloads to decide",
            points=undecidable,
        )
    return cnt


def count_near_curve(cfg: CurveConfig) -> int:
    """Number of n in [N, 2N] with ||X/n^s|| strictly below delta.

    Uses exact rational arithmetic when the config carries exact squares
    (and 2s is an integer); otherwise high-precision evaluation that raises
    rather than misclassify points inside the guard band.
    """
    check_budget(2 * cfg.N, "near-curve window")
    if cfg.exact_capable:
        return _count_exact(cfg, cfg.N, 2 * cfg.N)
    return _count_general(cfg, cfg.N, 2 * cfg.N)


@dataclass(frozen=True)
class ShortIntervalInstance:
    """The window (x, x+y] for the fifth-power short sum, with the scan
    constant c3 and exact precondition flags."""

    x: Fraction
    y: Fraction
    c3: Fraction = Fraction(1, 4)

    def __post_init__(self):
        object.__setattr__(self, "x", _to_fraction(self.x))
        object.__setattr__(self, "y", _to_fraction(self.y))
        object.__setattr__(self, "c3", _to_fraction(self.c3))
        if self.x < 1:
            raise ArgumentError(f"x must be >= 1, got {self.x}")
        if not 0 <= self.y <= self.x:
            raise ArgumentError("need 0 <= y <= x")
        if not Fraction(0) < self.c3 <= Fraction(1, 4):
            raise ArgumentError(f"c3 must lie in (0, 1/4], got {self.c3}")

    @property
    def y_within_11_20(self) -> bool:
        """Exact test of y <= c3 * x^(11/20)."""
        return (self.y / self.c3) ** 20 <= self.x**11

    @property
    def y_within_19_36(self) -> bool:
        """Exact test of y <= c3 * x^(19/36)."""
        return (self.y / self.c3) ** 36 <= self.x**19


def _fifth_root_floor_sum(t: Fraction, mu: np.ndarray) -> int:
    """sum_{d <= sqrt(t)} mu(d) * floor((t/d^2)^(1/5)), exactly.

    ``mu`` must cover d <= floor(sqrt(t)).  Integer t takes a vectorized
    path; general rationals fall back to per-d exact root extraction.
    """
    if t < 1:
        return 0
    top = isqrt(_floor_frac(t))
    if len(mu) <= top:
        raise ArgumentError("mobius table too short")
    if t.denominator == 1:
        ti = t.numerator
        d = np.arange(1, top + 1, dtype=np.int64)
        k = floor_root_grid(ti // (d * d), 5)
        return int(np.dot(mu[1 : top + 1].astype(np.int64), k))
    total = 0
    for d in range(1, top + 1):
        m = int(mu[d])
        if m:
            total += m * _floor_root(t / (d * d), 5)
    return total


def short_interval_sum(inst: ShortIntervalInstance) -> int:
    """Exact sum of the fifth-power convolution over (x, x+y].

    Evaluated as the difference of the endpoint floor identities; integer
    root extraction makes fifth-power boundaries exact by construction.
    """
    top = isqrt(_floor_frac(inst.x + inst.y))
    check_budget(top + 1, "short-interval endpoint evaluation")
    mu = mobius_sieve(top if top >= 1 else 1).values
    return _fifth_root_floor_sum(inst.x + inst.y, mu) - _fifth_root_floor_sum(
        inst.x, mu
    )


@dataclass(frozen=True)
class BoundShapes:
    """The three derivative-test bound shapes at one window, constant 1."""

    N: int
    delta: float
    fifth_derivative: float
    filaseta_trifonov: float
    first_derivative: float
    lambda4: float
    lambda5: float
    lambda1_at_base: float
    lambda1_at_top: float
    ft_condition_ok: bool  # N^2 delta <= c3, exact
    ft_domain_ok: bool  # N <= X^(1/s) for X = sqrt(x), s = 5/2, exact
    applicable: str


def _applicable_shape(n: int, x: Fraction) -> str:
    """Range membership per the three-way split at 2x^(1/10) and 2x^(1/6)."""
    if Fraction(n) ** 10 <= 1024 * x:
        return "fifth_derivative"
    if Fraction(n) ** 6 <= 64 * x:
        return "filaseta_trifonov"
    return "first_derivative"


def bound_shapes(
    N: int, x, y, c3=Fraction(1, 4), delta_sq: Fraction | None = None
) -> BoundShapes:
    """Evaluate all three bound shapes at window base N for the canonical
    curve sqrt(x/n^5) with delta = y / sqrt(N^5 x) (or a supplied delta^2)."""
    x = _to_fraction(x)
    y = _to_fraction(y)
    c3 = _to_fraction(c3)
    if N < 1:
        raise ArgumentError(f"N must be >= 1, got {N}")
    if delta_sq is None:
        delta_sq = y * y / (Fraction(N) ** 5 * x)
    xf = float(x)
    delta = float(delta_sq) ** 0.5
    lam5 = (xf * float(N) ** -15) ** 0.5
    lam4 = (xf * float(N) ** -13) ** 0.5
    fifth = N * lam5 ** (1 / 15) + N * delta ** (1 / 6) + (delta / lam4) ** 0.25 + 1
    rootx = xf**0.5
    ft = (rootx * N**0.5) ** (1 / 7) + delta * (rootx * float(N) ** 56.5) ** (1 / 21)
    lam1_base = 2.5 * rootx * float(N) ** -3.5
    lam1_top = 2.5 * rootx * float(2 * N) ** -3.5
    first = N * lam1_base + N * delta + delta / lam1_base + 1
    # exact flags: (N^2 delta)^2 <= c3^2  and  N <= (sqrt(x))^(2/5) i.e. N^10 <= x^2
    ft_cond = Fraction(N) ** 4 * delta_sq <= c3 * c3
    ft_dom = Fraction(N) ** 10 <= x * x
    return BoundShapes(
        N=N,
        delta=delta,
        fifth_derivative=fifth,
        filaseta_trifonov=ft,
        first_derivative=first,
        lambda4=lam4,
        lambda5=lam5,
        lambda1_at_base=lam1_base,
        lambda1_at_top=lam1_top,
        ft_condition_ok=ft_cond,
        ft_domain_ok=ft_dom,
        applicable=_applicable_shape(N, x),
    )


@dataclass(frozen=True)
class ScanRow:
    """One dyadic-window piece of the n-scan.

    ``n_lo``/``n_hi`` are inclusive; ``delta_sq`` = y^2/(n_lo^5 x) so the
    threshold is valid for every n >= n_lo in the piece.  ``window_double``
    counts pairs (d, n) with x < d^2 n^5 <= x+y and n in the piece;
    ``near_curve_count`` is the exact R over the piece.  Shape fields are
    None in a counts-only decomposition.
    """

    window_base: int
    n_lo: int
    n_hi: int
    delta_sq: Fraction
    delta: float
    window_double: int
    near_curve_count: int
    shape: str | None
    shape_value: float | None
    ft_condition_ok: bool | None
    ratio: float | None


@dataclass(frozen=True)
class RangeScanReport:
    """Exact short-interval accounting plus per-window bound comparisons.

    Invariants (enforced): the pieces tile (n_min - 1, n_max] with no gaps
    or overlaps; every piece satisfies the exact threshold guard
    16 y^2 < n_lo^5 x; summed piece double counts plus the small-n part
    equal the total double count; |short_sum| <= total_double.
    """

    x: Fraction
    y: Fraction
    c3: Fraction
    y_within_11_20: bool
    y_within_19_36: bool
    n_min: int
    n_max: int
    rows: tuple[ScanRow, ...]
    small_n_double: int
    total_double: int
    short_sum: int
    trivial_bound: int
    assembled_bound: float | None
    ratio_short_to_assembled: float | None


def _pair_count(x: Fraction, y: Fraction, n: int) -> int:
    """#{d >= 1 : x < d^2 n^5 <= x+y}, exactly."""
    n5 = Fraction(n) ** 5
    hi = isqrt(_floor_frac((x + y) / n5))
    lo = isqrt(_floor_frac(x / n5))
    return hi - lo


def _tau_window_sum(x: Fraction, y: Fraction) -> int:
    """sum of the divisor count over integers in (x, x+y]."""
    lo = _floor_frac(x) + 1
    hi = _floor_frac(x + y)
    if hi < lo:
        return 0
    check_budget(hi - lo + 1, "divisor window sum")
    primes = segment_primes(hi + 1)
    tau = _kernels.factor_block(lo, hi + 1, primes, want_tau=True)["tau"]
    return int(np.sum(tau, dtype=np.int64))


def _scan(inst: ShortIntervalInstance, with_shapes: bool) -> RangeScanReport:
    x, y, c3 = inst.x, inst.y, inst.c3
    # scan interval: n > (16 y^2 / x)^(1/5)  and  n <= (2x)^(1/5), exactly
    n_min = _floor_root(16 * y * y / x, 5) + 1
    n_max = _floor_root(2 * x, 5)
    b1 = _floor_root(1024 * x, 10)  # n <= 2 x^(1/10)
    b2 = _floor_root(64 * x, 6)  # n <= 2 x^(1/6)

    small_n = sum(_pair_count(x, y, n) for n in range(1, min(n_min, n_max + 1)))
    rows: list[ScanRow] = []
    total = small_n
    n = n_min
    while n <= n_max:
        base = 1 << (n.bit_length() - 1)  # dyadic window [base, 2*base)
        hi = min(2 * base - 1, n_max)
        # split additionally at the derivative-test range boundaries
        for b in (b1, b2):
            if n <= b < hi:
                hi = b
        if 16 * y * y >= Fraction(n) ** 5 * x:
            raise TaucharError(
                f"threshold guard failed at n={n}; scan bounds inconsistent"
            )
        dsq = y * y / (Fraction(n) ** 5 * x)
        window_double = 0
        r_count = 0
        for m in range(n, hi + 1):
            c = _pair_count(x, y, m)
            if c > 1:
                # the d^2-interval has length y/m^5 < 1 here, so one d at most
                raise TaucharError(f"{c} pairs at n={m}; scan bounds inconsistent")
            near = dsq > 0 and _near_integer_sq(x / Fraction(m) ** 5, dsq)
            if c > near:
                # a pair means the curve point sits within the gap, and the
                # gap is strictly below the threshold for every m >= n
                raise TaucharError(
                    f"pair at n={m} not captured by the near-curve count"
                )
            window_double += c
            r_count += near
        total += window_double
        shape = shape_value = ft_ok = ratio = None
        if with_shapes:
            shapes = bound_shapes(n, x, y, c3, delta_sq=dsq if dsq > 0 else None)
            shape = shapes.applicable
            shape_value = getattr(shapes, shape)
            ft_ok = shapes.ft_condition_ok if shape == "filaseta_trifonov" else None
            ratio = r_count / shape_value
        rows.append(
            ScanRow(
                window_base=base,
                n_lo=n,
                n_hi=hi,
                delta_sq=dsq,
                delta=float(dsq) ** 0.5,
                window_double=window_double,
                near_curve_count=r_count,
                shape=shape,
                shape_value=shape_value,
                ft_condition_ok=ft_ok,
                ratio=ratio,
            )
        )
        n = hi + 1

    short = short_interval_sum(inst)
    if abs(short) > total:
        raise TaucharError(
            f"|short sum| = {abs(short)} exceeds the double count {total}; "
            "the endpoint identity or the pair count is wrong"
        )
    assembled = ratio_sa = None
    if with_shapes:
        xf = float(x)
        assembled = (xf ** (1 / 12) + float(y) * xf ** (-4 / 9)) * log(xf)
        ratio_sa = abs(short) / assembled if assembled else None
    return RangeScanReport(
        x=x,
        y=y,
        c3=c3,
        y_within_11_20=inst.y_within_11_20,
        y_within_19_36=inst.y_within_19_36,
        n_min=n_min,
        n_max=n_max,
        rows=tuple(rows),
        small_n_double=small_n,
        total_double=total,
        short_sum=short,
        trivial_bound=_tau_window_sum(x, y),
        assembled_bound=assembled,
        ratio_short_to_assembled=ratio_sa,
    )


def decompose_short_interval(inst: ShortIntervalInstance) -> RangeScanReport:
    """Counts-only decomposition: exact double count, per-window pieces with
    exact near-curve counts and threshold guards; no bound shapes."""
    return _scan(inst, with_shapes=False)


def range_scan(inst: ShortIntervalInstance) -> RangeScanReport:
    """Full scan: decomposition plus bound shapes, the assembled right-hand
    side (x^(1/12) + y x^(-4/9)) log x, and exact-to-bound ratios."""
    return _scan(inst, with_shapes=True)
