"""Pure numpy kernel backend.

Same call surface as the compiled backend (`_ext`), selected by
``tauchar._kernels`` when the extension is unavailable or disabled.

Factorization of a block [lo, hi) is done with per-prime-power stride passes
rather than a smallest-prime-factor chain: numpy cannot follow the sequential
spf recurrence efficiently, but strided in-place updates run at C speed.  The
two backends therefore compute the same tables by different routes, which the
test suite exploits as a cross-check.
"""

from math import isqrt

import numpy as np

# Block size for internal segmentation: sieves beyond this many entries are
# processed in chunks so peak memory stays bounded.
DEFAULT_SEGMENT = 1 << 26

BACKEND_NAME = "python"


def _simple_prime_mask(limit: int) -> np.ndarray:
    """Boolean primality mask over [0, limit] by plain Eratosthenes."""
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return mask


def primes_up_to(limit: int, segment: int = DEFAULT_SEGMENT) -> np.ndarray:
    """All primes <= limit, ascending, as an int64 array (segmented)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    root = isqrt(limit)
    base_mask = _simple_prime_mask(root)
    base = np.nonzero(base_mask)[0].astype(np.int64)
    if limit == root:
        return base
    parts = [base]
    for lo in range(root + 1, limit + 1, segment):
        hi = min(lo + segment, limit + 1)
        mark = np.ones(hi - lo, dtype=bool)
        for p in base:
            p = int(p)
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start < hi:
                mark[start - lo :: p] = False
        parts.append(np.nonzero(mark)[0].astype(np.int64) + lo)
    return np.concatenate(parts)


def spf_table(limit: int, segment: int = DEFAULT_SEGMENT) -> np.ndarray:
    """Smallest-prime-factor table over [0, limit] (entries 0 and 1 are 0).

    Filled block by block; within a block, primes are applied ascending and
    only positions not yet claimed by a smaller prime are written, so each
    entry ends up with its smallest prime factor.  Unwritten entries >= 2
    after all base primes are themselves prime.
    """
    spf = np.zeros(limit + 1, dtype=np.uint32)
    if limit < 2:
        return spf
    base = primes_up_to(isqrt(limit), segment)
    for lo in range(2, limit + 1, segment):
        hi = min(lo + segment, limit + 1)
        view = spf[lo:hi]
        for p in base:
            p = int(p)
            if p * p >= hi:
                break
            # composites with smallest factor p start at p*p
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start >= hi:
                continue
            sl = view[start - lo :: p]
            sl[sl == 0] = p
        unmarked = np.nonzero(view == 0)[0]
        view[unmarked] = (unmarked + lo).astype(np.uint32)
    return spf


def factor_block(
    lo: int,
    hi: int,
    primes: np.ndarray,
    want_tau: bool = False,
    want_mu: bool = False,
    want_liou: bool = False,
) -> dict:
    """Divisor count / Mobius / Liouville values for n in [lo, hi).

    ``primes`` must contain every prime p with p*p < hi.  Returns a dict with
    keys among {'tau' (int16), 'mu' (int8), 'liou' (int8)}, arrays indexed by
    n - lo.  Exact for hi <= ~1.8e9 (divisor counts below that fit in int16;
    callers enforce far smaller budgets).
    """
    if lo < 1 or hi <= lo:
        raise ValueError("factor_block requires 1 <= lo < hi")
    size = hi - lo
    rem = np.arange(lo, hi, dtype=np.int64)
    tau = np.ones(size, dtype=np.int16) if want_tau else None
    mu = np.ones(size, dtype=np.int8) if want_mu else None
    liou = np.ones(size, dtype=np.int8) if want_liou else None

    for p in primes:
        p = int(p)
        if p * p >= hi:
            break
        start = ((lo + p - 1) // p) * p
        if start >= hi:
            continue
        s1 = slice(start - lo, size, p)
        rem[s1] //= p
        if want_tau:
            tau[s1] *= 2
        if want_mu:
            np.negative(mu[s1], out=mu[s1])
        if want_liou:
            np.negative(liou[s1], out=liou[s1])
        # exponent k >= 2: positions divisible by p^k carry divisor factor k
        # from the previous level, promoted in place to k+1
        k, pk = 2, p * p
        while pk < hi:
            start_k = ((lo + pk - 1) // pk) * pk
            if start_k >= hi:
                break
            sk = slice(start_k - lo, size, pk)
            rem[sk] //= p
            if want_tau:
                tau[sk] = tau[sk] // k * (k + 1)
            if want_mu:
                mu[sk] = 0
            if want_liou:
                np.negative(liou[sk], out=liou[sk])
            k += 1
            pk *= p

    # whatever remains after removing all p <= sqrt(hi) is 1 or a single prime
    big = rem > 1
    out = {}
    if want_tau:
        tau[big] *= 2
        out["tau"] = tau
    if want_mu:
        np.negative(mu, out=mu, where=big)
        out["mu"] = mu
    if want_liou:
        np.negative(liou, out=liou, where=big)
        out["liou"] = liou
    return out


def full_tables(
    limit: int,
    segment: int = DEFAULT_SEGMENT,
    want_tau: bool = False,
    want_mu: bool = False,
    want_liou: bool = False,
) -> dict:
    """Tables over [0, limit] (index 0 unused, set to 0), built block-wise."""
    base = primes_up_to(isqrt(limit), segment) if limit >= 4 else np.empty(0, np.int64)
    out = {}
    if want_tau:
        out["tau"] = np.zeros(limit + 1, dtype=np.int16)
    if want_mu:
        out["mu"] = np.zeros(limit + 1, dtype=np.int8)
    if want_liou:
        out["liou"] = np.zeros(limit + 1, dtype=np.int8)
    for lo in range(1, limit + 1, segment):
        hi = min(lo + segment, limit + 1)
        block = factor_block(lo, hi, base, want_tau, want_mu, want_liou)
        for key, arr in block.items():
            out[key][lo:hi] = arr
    return out


def weighted_floor_sum(values: np.ndarray, x: int, chunk: int = 1 << 22) -> int:
    """Sum of values[d] * (x // d) over 1 <= d <= min(x, len(values) - 1).

    ``values`` is indexed by d (entry 0 ignored).  Accumulated in int64
    chunks; the result is returned as an exact Python int.  The magnitude is
    bounded by x * H_x which stays far below 2^63 for x <= 1e9.
    """
    top = min(x, len(values) - 1)
    total = 0
    for lo in range(1, top + 1, chunk):
        hi = min(lo + chunk, top + 1)
        d = np.arange(lo, hi, dtype=np.int64)
        total += int(np.dot(values[lo:hi].astype(np.int64), x // d))
    return total
