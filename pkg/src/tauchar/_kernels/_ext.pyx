# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel backend.

Full tables use a smallest-prime-factor chain in one linear pass; arbitrary
blocks use scalar trial division by sieved primes.  Both are tight C loops
over preallocated numpy arrays.
"""

from math import isqrt

import numpy as np

cimport numpy as cnp

cnp.import_array()

DEFAULT_SEGMENT = 1 << 26

BACKEND_NAME = "c"


def primes_up_to(long long limit, long long segment=DEFAULT_SEGMENT):
    """All primes <= limit, ascending, as an int64 array (segmented)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    cdef long long root = isqrt(limit)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] mask = np.ones(root + 1, dtype=np.uint8)
    cdef long long i, j
    mask[0] = mask[1] = 0
    i = 2
    while i * i <= root:
        if mask[i]:
            j = i * i
            while j <= root:
                mask[j] = 0
                j += i
        i += 1
    base = np.nonzero(mask)[0].astype(np.int64)
    if limit == root:
        return base
    cdef cnp.ndarray[cnp.int64_t, ndim=1] basep = base
    cdef long long nbase = basep.shape[0]
    parts = [base]
    cdef long long lo = root + 1
    cdef long long hi, p, start, k
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] mark
    while lo <= limit:
        hi = lo + segment
        if hi > limit + 1:
            hi = limit + 1
        mark = np.ones(hi - lo, dtype=np.uint8)
        for k in range(nbase):
            p = basep[k]
            if p * p >= hi:
                break
            start = p * p
            if start < lo:
                start = ((lo + p - 1) // p) * p
            j = start - lo
            while j < hi - lo:
                mark[j] = 0
                j += p
        parts.append(np.nonzero(mark)[0].astype(np.int64) + lo)
        lo = hi
    return np.concatenate(parts)


def spf_table(long long limit, long long segment=DEFAULT_SEGMENT):
    """Smallest-prime-factor table over [0, limit] (entries 0 and 1 are 0)."""
    cdef cnp.ndarray[cnp.uint32_t, ndim=1] spf = np.zeros(limit + 1, dtype=np.uint32)
    if limit < 2:
        return spf
    cdef cnp.ndarray[cnp.int64_t, ndim=1] base = primes_up_to(isqrt(limit), segment)
    cdef long long nbase = base.shape[0]
    cdef long long lo = 2
    cdef long long hi, p, start, j, k, n
    while lo <= limit:
        hi = lo + segment
        if hi > limit + 1:
            hi = limit + 1
        for k in range(nbase):
            p = base[k]
            if p * p >= hi:
                break
            start = p * p
            if start < lo:
                start = ((lo + p - 1) // p) * p
            j = start
            while j < hi:
                if spf[j] == 0:
                    spf[j] = <cnp.uint32_t>p
                j += p
        for n in range(lo, hi):
            if spf[n] == 0:
                spf[n] = <cnp.uint32_t>n
        lo = hi
    return spf


def full_tables(
    long long limit,
    long long segment=DEFAULT_SEGMENT,
    bint want_tau=False,
    bint want_mu=False,
    bint want_liou=False,
):
    """Tables over [0, limit] via a one-pass recurrence on the spf chain.

    For n = p^e * m with p = spf(n), p not dividing m, every table value at n
    follows from the value at m, which is already known when n is reached.
    """
    cdef cnp.ndarray[cnp.uint32_t, ndim=1] spf = spf_table(limit, segment)
    cdef cnp.ndarray[cnp.int16_t, ndim=1] tau
    cdef cnp.ndarray[cnp.int8_t, ndim=1] mu
    cdef cnp.ndarray[cnp.int8_t, ndim=1] liou
    out = {}
    if want_tau:
        tau = np.zeros(limit + 1, dtype=np.int16)
        out["tau"] = tau
    if want_mu:
        mu = np.zeros(limit + 1, dtype=np.int8)
        out["mu"] = mu
    if want_liou:
        liou = np.zeros(limit + 1, dtype=np.int8)
        out["liou"] = liou
    if limit < 1:
        return out
    if want_tau:
        tau[1] = 1
    if want_mu:
        mu[1] = 1
    if want_liou:
        liou[1] = 1
    cdef long long n, p, m, e
    for n in range(2, limit + 1):
        p = spf[n]
        m = n // p
        e = 1
        while m % p == 0:
            m //= p
            e += 1
        if want_tau:
            tau[n] = tau[m] * <cnp.int16_t>(e + 1)
        if want_mu:
            mu[n] = -mu[m] if e == 1 else 0
        if want_liou:
            liou[n] = liou[m] if e % 2 == 0 else -liou[m]
    return out


def factor_block(
    long long lo,
    long long hi,
    cnp.ndarray[cnp.int64_t, ndim=1] primes,
    bint want_tau=False,
    bint want_mu=False,
    bint want_liou=False,
):
    """Divisor count / Mobius / Liouville values for n in [lo, hi).

    Scalar trial division by every sieved prime p with p*p < hi; whatever
    remains of each n afterwards is 1 or a single large prime.
    """
    if lo < 1 or hi <= lo:
        raise ValueError("factor_block requires 1 <= lo < hi")
    cdef long long size = hi - lo
    cdef cnp.ndarray[cnp.int64_t, ndim=1] rem = np.arange(lo, hi, dtype=np.int64)
    cdef cnp.ndarray[cnp.int16_t, ndim=1] tau
    cdef cnp.ndarray[cnp.int8_t, ndim=1] mu
    cdef cnp.ndarray[cnp.int8_t, ndim=1] liou
    out = {}
    if want_tau:
        tau = np.ones(size, dtype=np.int16)
        out["tau"] = tau
    if want_mu:
        mu = np.ones(size, dtype=np.int8)
        out["mu"] = mu
    if want_liou:
        liou = np.ones(size, dtype=np.int8)
        out["liou"] = liou
    cdef long long nprimes = primes.shape[0]
    cdef long long k, p, start, j, e, v
    for k in range(nprimes):
        p = primes[k]
        if p * p >= hi:
            break
        start = ((lo + p - 1) // p) * p
        j = start - lo
        while j < size:
            v = rem[j]
            e = 0
            while v % p == 0:
                v //= p
                e += 1
            rem[j] = v
            if want_tau:
                tau[j] = tau[j] * <cnp.int16_t>(e + 1)
            if want_mu:
                mu[j] = -mu[j] if e == 1 else 0
            if want_liou and e % 2 == 1:
                liou[j] = -liou[j]
            j += p
    for j in range(size):
        if rem[j] > 1:
            if want_tau:
                tau[j] = tau[j] * 2
            if want_mu:
                mu[j] = -mu[j]
            if want_liou:
                liou[j] = -liou[j]
    return out


def weighted_floor_sum(values, long long x, long long chunk=1 << 22):
    """Sum of values[d] * (x // d) over 1 <= d <= min(x, len(values) - 1).

    int8 input is consumed without widening so sieve-sized tables are not
    copied; other dtypes go through an int64 conversion.
    """
    cdef cnp.ndarray[cnp.int8_t, ndim=1] v8
    cdef cnp.ndarray[cnp.int64_t, ndim=1] v64
    cdef long long top, total = 0
    cdef long long d
    arr = np.asarray(values)
    if arr.dtype == np.int8:
        v8 = np.ascontiguousarray(arr)
        top = v8.shape[0] - 1
        if x < top:
            top = x
        for d in range(1, top + 1):
            total += v8[d] * (x // d)
        return int(total)
    v64 = np.ascontiguousarray(arr, dtype=np.int64)
    top = v64.shape[0] - 1
    if x < top:
        top = x
    for d in range(1, top + 1):
        total += v64[d] * (x // d)
    return int(total)
