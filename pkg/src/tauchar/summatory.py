"""Large-argument summatory computations and residual diagnostics.

The central quantity is S(x) = sum over d <= x of tauchar(d) * floor(x/d),
the partial sum of the tau character convolved with the constant function 1.
It is computed exactly from the character sieve (O(x) memory, O(x) time per
evaluation); everything float-valued here is derived from exact integers and
certified constants, so residuals carry honest error intervals.
"""

from dataclasses import dataclass
from math import exp, isqrt, log

import numpy as np

from . import _kernels
from .constants import (
    Branch,
    CaseClass,
    THETA_UPPER,
    X_FLOOR,
    classify,
    main_term,
    main_term_params,
)
from .errors import ArgumentError, ClassificationError
from .roots import floor_root_grid
from .sieves import (
    LegendreChar,
    check_budget,
    liouville_sieve,
    mobius_sieve,
    tau_char_sieve,
)

DEFAULT_LIMIT = 10**8


def _validate_x(x: int, limit: int) -> int:
    x = int(x)
    if x < 1:
        raise ArgumentError(f"x must be >= 1, got {x}")
    check_budget(x, "summatory evaluation")
    if x > limit:
        raise ArgumentError(
            f"x = {x} exceeds the configured limit {limit}; raise the limit "
            "explicitly to accept the memory cost"
        )
    return x


def summatory_convolved(
    q: int, x: int, *, limit: int = DEFAULT_LIMIT, table: np.ndarray | None = None
) -> int:
    """Exact S(x) = sum_{d <= x} tauchar_q(d) * floor(x / d).

    ``table`` may carry a precomputed character table (values indexed by d,
    length > x) to amortize the sieve across many evaluations.
    """
    x = _validate_x(x, limit)
    if table is None:
        table = tau_char_sieve(LegendreChar(q), x).values
    elif len(table) <= x:
        raise ArgumentError(f"provided table covers d < {len(table)}, need {x}")
    return _kernels.weighted_floor_sum(table, x)


def mertens(x: int, *, limit: int = DEFAULT_LIMIT) -> int:
    """Exact partial sum of the Mobius function up to x."""
    x = _validate_x(x, limit)
    mu = mobius_sieve(x)
    return int(np.sum(mu.values[1:], dtype=np.int64))


def _prefix_sums(q: int, limit: int) -> np.ndarray:
    """S(1..limit) for the q-character convolved with 1, as one pass.

    sum_{n<=x} sum_{d|n} a(d) = sum_d a(d) floor(x/d) accumulates by adding
    a(d) at every multiple of d, then prefix-summing.
    """
    a = tau_char_sieve(LegendreChar(q), limit).values
    acc = np.zeros(limit + 1, dtype=np.int64)
    for d in range(1, limit + 1):
        if a[d]:
            acc[d::d] += a[d]
    return np.cumsum(acc)


def square_root_identity_scan(limit: int) -> int | None:
    """First x <= limit where the Liouville convolution sum differs from
    floor(sqrt(x)); None when the identity holds everywhere.

    The left side marks perfect squares (divisor-sum of the prime-parity
    sign), so its partial sum counts squares up to x.
    """
    check_budget(limit, "identity scan")
    lam = liouville_sieve(limit).values
    acc = np.zeros(limit + 1, dtype=np.int64)
    for d in range(1, limit + 1):
        if lam[d]:
            acc[d::d] += lam[d]
    s = np.cumsum(acc)
    x = np.arange(0, limit + 1, dtype=np.int64)
    expect = floor_root_grid(x, 2)
    bad = np.nonzero(s[1:] != expect[1:])[0]
    return int(bad[0]) + 1 if bad.size else None


def cube_root_identity_scan(limit: int) -> int | None:
    """First x <= limit where the q=3 convolution sum differs from
    floor(x^(1/3)); None when the identity holds everywhere."""
    check_budget(limit, "identity scan")
    s = _prefix_sums(3, limit)
    x = np.arange(0, limit + 1, dtype=np.int64)
    expect = floor_root_grid(x, 3)
    bad = np.nonzero(s[1:] != expect[1:])[0]
    return int(bad[0]) + 1 if bad.size else None


def fifth_power_identity_scan(limit: int) -> int | None:
    """First x <= limit where the q=5 convolution sum differs from
    sum_{d <= sqrt(x)} mu(d) floor((x/d^2)^(1/5)); None when none differs.

    The right side is assembled per squarefree d over the whole x-grid, so
    the two sides come from independent pipelines (character sieve and
    convolution on one side, Mobius sieve and integer roots on the other).
    """
    check_budget(limit, "identity scan")
    s = _prefix_sums(5, limit)
    x = np.arange(0, limit + 1, dtype=np.int64)
    expect = np.zeros(limit + 1, dtype=np.int64)
    mu = mobius_sieve(isqrt(limit)).values
    for d in range(1, isqrt(limit) + 1):
        if mu[d]:
            expect[d * d :] += mu[d] * floor_root_grid(x[d * d :] // (d * d), 5)
    bad = np.nonzero(s[1:] != expect[1:])[0]
    return int(bad[0]) + 1 if bad.size else None

def liouville_summatory(x: int, *, limit: int = DEFAULT_LIMIT) -> int:
    """Exact partial sum of the completely multiplicative sign function
    (parity of the number of prime factors) up to x."""
    x = _validate_x(x, limit)
    lv = liouville_sieve(x)
    return int(np.sum(lv.values[1:], dtype=np.int64))


def default_checkpoints(limit: int = DEFAULT_LIMIT) -> tuple[int, ...]:
    """Powers of two from 2^10 up to the limit."""
    if limit < 1024:
        raise ArgumentError(f"limit {limit} leaves no default checkpoints")
    out = []
    x = 1024
    while x <= limit:
        out.append(x)
        x *= 2
    return tuple(out)


def default_alphas(case: CaseClass) -> tuple[float, ...]:
    """Normalization exponents matching each branch's proven error scale,
    padded by 0.05 where an epsilon appears in the exponent."""
    if case.branch is Branch.PM1_MOD8:
        return (max(1.0 / case.log_factor_start, float(THETA_UPPER)) + 0.05,)
    if case.branch is Branch.PM11_MOD24:
        return (1.0 / 3.0 + 0.05,)
    if case.branch is Branch.Q_EQUALS_3:
        return (1.0 / 3.0,)
    return (0.5,)


@dataclass(frozen=True)
class SummatoryTrace:
    """Exact values vs main terms along a checkpoint schedule.

    ``residual_intervals`` bracket value - main_term using the certified
    constant errors; ``fitted_exponent`` is a least-squares slope of
    log|residual| against log x — a report field, never an assertion.
    """

    q: int
    kind: str
    checkpoints: tuple[int, ...]
    values: tuple[int, ...]
    main_values: tuple[float, ...]
    main_errors: tuple[float, ...]
    residuals: tuple[float, ...]
    residual_intervals: tuple[tuple[float, float], ...]
    alphas: tuple[float, ...]
    normalized: tuple[tuple[float, ...], ...]  # normalized[i][j]: alpha_i at x_j
    fitted_exponent: float | None


def _validate_checkpoints(checkpoints, limit: int, floor: float) -> tuple[int, ...]:
    cps = tuple(int(c) for c in checkpoints)
    if not cps:
        raise ArgumentError("checkpoint list is empty")
    if any(b <= a for a, b in zip(cps, cps[1:])):
        raise ArgumentError("checkpoints must be strictly ascending")
    if cps[0] < floor:
        raise ArgumentError(
            f"smallest checkpoint {cps[0]} is below the asymptotic floor "
            f"{floor:.1f}"
        )
    _validate_x(cps[-1], limit)
    return cps


def trace(
    q: int,
    checkpoints=None,
    alphas=None,
    *,
    limit: int = DEFAULT_LIMIT,
    prime_cutoff: int | None = None,
    progress=None,
) -> SummatoryTrace:
    """Exact summatory values against the branch main term along checkpoints.

    ``progress``, when given, is called as progress(stage, done, total) after
    the sieve and after each checkpoint; rate limiting is the caller's job.
    """
    case = classify(q)
    if checkpoints is None:
        checkpoints = default_checkpoints(limit)
    cps = _validate_checkpoints(checkpoints, limit, X_FLOOR)
    if alphas is None:
        alphas = default_alphas(case)
    alphas = tuple(float(a) for a in alphas)
    if any(a <= 0 or a > 1 for a in alphas):
        raise ArgumentError(f"normalization exponents must lie in (0, 1]: {alphas}")

    params = main_term_params(q, prime_cutoff=prime_cutoff)
    top = cps[-1]
    table = tau_char_sieve(LegendreChar(q), top).values
    if progress is not None:
        progress("sieve", 1, 1)
    values = []
    for i, x in enumerate(cps):
        values.append(_kernels.weighted_floor_sum(table, x))
        if progress is not None:
            progress("checkpoint", i + 1, len(cps))
    values = tuple(values)
    mains = [main_term(q, float(x), params=params) for x in cps]
    residuals = tuple(float(v) - m.value for v, m in zip(values, mains))
    intervals = tuple(
        (r - m.error, r + m.error) for r, m in zip(residuals, mains)
    )
    normalized = tuple(
        tuple(r / float(x) ** a for r, x in zip(residuals, cps)) for a in alphas
    )
    fitted = None
    pts = [
        (log(float(x)), log(abs(r))) for x, r in zip(cps, residuals) if r != 0.0
    ]
    if len(pts) >= 2:
        xs, ys = zip(*pts)
        fitted = float(np.polyfit(np.array(xs), np.array(ys), 1)[0])
    return SummatoryTrace(
        q=q,
        kind=mains[0].kind,
        checkpoints=cps,
        values=values,
        main_values=tuple(m.value for m in mains),
        main_errors=tuple(m.error for m in mains),
        residuals=residuals,
        residual_intervals=intervals,
        alphas=alphas,
        normalized=normalized,
        fitted_exponent=fitted,
    )


def subexp_decay(x: float, c: float) -> float:
    """exp(-c (log x)^{3/5} (log log x)^{-1/5}); needs log log x > 0."""
    if x <= exp(1.0):
        raise ArgumentError(f"decay shape needs x > e, got {x}")
    lx = log(x)
    return exp(-c * lx ** 0.6 * log(lx) ** -0.2)


def rh_growth(x: float, eps: float) -> float:
    """exp((log x)^{1/2} (log log x)^{5/2 + eps}); needs log log x > 0."""
    if x <= exp(1.0):
        raise ArgumentError(f"growth shape needs x > e, got {x}")
    if not 0.0 < eps < 0.25:
        raise ArgumentError(f"eps must lie in (0, 1/4), got {eps}")
    lx = log(x)
    return exp(lx ** 0.5 * log(lx) ** (2.5 + eps))


@dataclass(frozen=True)
class GrowthDiagnostic:
    """Normalized |S(x)| against the two conjectural growth envelopes.

    ``ratio_unconditional`` divides by sqrt(x) * subexp_decay(x^{1/4}, c);
    ``ratio_conditional`` divides by x^{1/4} * rh_growth(sqrt(x), eps).
    Implied constants are unknown, so this is a report with no verdict.
    """

    q: int
    c: float
    eps: float
    checkpoints: tuple[int, ...]
    values: tuple[int, ...]
    ratio_unconditional: tuple[float, ...]
    ratio_conditional: tuple[float, ...]


def rh_diagnostic(
    q: int,
    checkpoints=None,
    *,
    eps: float = 0.01,
    c: float = 0.2,
    limit: int = DEFAULT_LIMIT,
    progress=None,
) -> GrowthDiagnostic:
    """Growth-envelope ratios for the branch with no main term."""
    case = classify(q)
    if case.branch is not Branch.PM5_MOD24:
        raise ClassificationError(
            f"growth diagnostic applies to the +-5 mod 24 branch only; "
            f"q={q} is {case.branch.value}"
        )
    if not 0.0 < eps < 0.25:
        raise ArgumentError(f"eps must lie in (0, 1/4), got {eps}")
    if c <= 0:
        raise ArgumentError(f"c must be positive, got {c}")
    if checkpoints is None:
        checkpoints = default_checkpoints(limit)
    cps = _validate_checkpoints(checkpoints, limit, X_FLOOR)
    top = cps[-1]
    table = tau_char_sieve(LegendreChar(q), top).values
    if progress is not None:
        progress("sieve", 1, 1)
    values = []
    for i, x in enumerate(cps):
        values.append(_kernels.weighted_floor_sum(table, x))
        if progress is not None:
            progress("checkpoint", i + 1, len(cps))
    values = tuple(values)
    uncond = tuple(
        abs(v) / (float(x) ** 0.5 * subexp_decay(float(x) ** 0.25, c))
        for v, x in zip(values, cps)
    )
    cond = tuple(
        abs(v) / (float(x) ** 0.25 * rh_growth(float(x) ** 0.5, eps))
        for v, x in zip(values, cps)
    )
    return GrowthDiagnostic(
        q=q,
        c=c,
        eps=eps,
        checkpoints=cps,
        values=values,
        ratio_unconditional=uncond,
        ratio_conditional=cond,
    )
