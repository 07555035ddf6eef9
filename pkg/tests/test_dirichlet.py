"""Coefficient algebra against brute-force oracles, and the factorization
routes for every structural branch."""

import numpy as np
import pytest

from tauchar.dirichlet import (
    Family,
    FormalPowerSeries,
    dirichlet_convolve,
    dirichlet_inverse,
    expand_euler_product,
    local_factor,
    verify_factorization,
)
from tauchar.errors import (
    ArgumentError,
    ClassificationError,
    NotInvertibleError,
    OverflowHardError,
)
from tauchar.sieves import (
    CoeffSeries,
    identity_series,
    mobius_sieve,
    ones_series,
    tau_char_sieve,
)


def brute_convolve(a: CoeffSeries, b: CoeffSeries) -> list[int]:
    n = a.limit
    out = [0] * (n + 1)
    for d in range(1, n + 1):
        for m in range(d, n + 1, d):
            out[m] += a[d] * b[m // d]
    return out


def random_series(rng, limit, lo=-5, hi=6) -> CoeffSeries:
    vals = rng.integers(lo, hi, size=limit + 1)
    vals[0] = 0
    return CoeffSeries.from_values(vals)


def test_convolution_matches_brute_force():
    rng = np.random.default_rng(2)
    for _ in range(10):
        a = random_series(rng, 200)
        b = random_series(rng, 200)
        got = dirichlet_convolve(a, b)
        expect = brute_convolve(a, b)
        assert all(got[n] == expect[n] for n in range(1, 201))


def test_convolution_ring_laws():
    rng = np.random.default_rng(3)
    a = random_series(rng, 150)
    b = random_series(rng, 150)
    c = random_series(rng, 150)
    ab = dirichlet_convolve(a, b)
    ba = dirichlet_convolve(b, a)
    assert ab == ba
    assert dirichlet_convolve(ab, c) == dirichlet_convolve(a, dirichlet_convolve(b, c))
    e = identity_series(150)
    assert dirichlet_convolve(a, e) == a


def test_convolution_requires_equal_limits():
    rng = np.random.default_rng(4)
    with pytest.raises(ArgumentError):
        dirichlet_convolve(random_series(rng, 100), random_series(rng, 101))


def test_convolution_overflow_guard():
    big = np.zeros(101, dtype=np.int64)
    big[1] = 1
    big[2] = 2**62
    s = CoeffSeries.from_values(big)
    with pytest.raises(OverflowHardError):
        dirichlet_convolve(s, s)


def test_inverse_is_two_sided():
    rng = np.random.default_rng(5)
    e = identity_series(120)
    for sign in (1, -1):
        a = random_series(rng, 120)
        vals = np.array(a.values, copy=True)
        vals[1] = sign
        a = CoeffSeries.from_values(vals)
        inv = dirichlet_inverse(a)
        assert dirichlet_convolve(a, inv) == e
        assert dirichlet_convolve(inv, a) == e


def test_inverse_of_ones_is_mobius():
    n = 2000
    assert dirichlet_inverse(ones_series(n)) == mobius_sieve(n)


def test_inverse_rejects_non_unit():
    vals = np.zeros(11, dtype=np.int64)
    vals[1] = 2
    with pytest.raises(NotInvertibleError):
        dirichlet_inverse(CoeffSeries.from_values(vals))


def test_power_series_division_round_trip():
    rng = np.random.default_rng(6)
    for _ in range(20):
        a = FormalPowerSeries.from_ints(list(rng.integers(-4, 5, size=12)), 11)
        bv = list(rng.integers(-4, 5, size=12))
        bv[0] = int(rng.choice([1, -1, 2]))
        b = FormalPowerSeries.from_ints(bv, 11)
        assert (a * b).divide(b).coeffs == a.coeffs


def test_integer_coeffs_rejects_fractions():
    num = FormalPowerSeries.from_ints([1, 1], 4)
    den = FormalPowerSeries.from_ints([2, 1], 4)
    with pytest.raises(ArgumentError):
        num.divide(den).integer_coeffs()


def test_log_branch_factor_q7_closed_form():
    # chi mod 7 steps give 1 - 2u^2 + 2u^3 - 2u^4 + u^6
    lf = local_factor(7, Family.PM1_MOD8)
    assert lf.numerator == (1, 0, -2, 2, -2, 0, 1)
    assert lf.denominator == (1,)


def test_local_factor_residue_guards():
    with pytest.raises(ClassificationError):
        local_factor(5, Family.PM1_MOD8)
    with pytest.raises(ClassificationError):
        local_factor(7, Family.PM11_MOD24)
    with pytest.raises(ClassificationError):
        local_factor(19, Family.PM43_53_MOD120)
    with pytest.raises(ClassificationError):
        local_factor(43, Family.PM19_29_MOD120)


@pytest.mark.parametrize("q", [19, 29, 101, 149, 211])
def test_combined_factor_splits_against_u4_family(q):
    # the +-19/+-29 mod 120 factor absorbs a (1 - u^4): raw * (1-u^4) == split
    order = 24
    raw = FormalPowerSeries.from_ints(
        local_factor(q, Family.PM5_MOD24_RAW).coeffs(2, order), order
    )
    split = FormalPowerSeries.from_ints(
        local_factor(q, Family.PM19_29_MOD120).coeffs(2, order), order
    )
    shift = FormalPowerSeries.from_ints([1, 0, 0, 0, -1], order)
    assert (raw * shift).coeffs == split.coeffs


@pytest.mark.parametrize("q", [43, 53, 67, 163, 173, 197])
def test_combined_factor_splits_against_inverse_u4_family(q):
    # the +-43/+-53 mod 120 factor sheds a (1 - u^4): split * (1-u^4) == raw
    order = 24
    raw = FormalPowerSeries.from_ints(
        local_factor(q, Family.PM5_MOD24_RAW).coeffs(2, order), order
    )
    split = FormalPowerSeries.from_ints(
        local_factor(q, Family.PM43_53_MOD120).coeffs(2, order), order
    )
    shift = FormalPowerSeries.from_ints([1, 0, 0, 0, -1], order)
    assert (split * shift).coeffs == raw.coeffs


def brute_multiplicative_value(n, coeff_fn):
    out, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out *= coeff_fn(p, e)
        p += 1
    if m > 1:
        out *= coeff_fn(m, 1)
    return out


def test_euler_expansion_is_multiplicative():
    lf = local_factor(7, Family.PM1_MOD8)
    n = 5000
    series = expand_euler_product(lf, n)

    def coeff(p, e):
        c = lf.coeffs(p, e)
        return c[e] if e < len(c) else 0

    for m in range(1, n + 1):
        assert series[m] == brute_multiplicative_value(m, coeff), m


def test_euler_expansion_prime_powers():
    lf = local_factor(11, Family.PM11_MOD24)
    series = expand_euler_product(lf, 3**7)
    c = lf.coeffs(3, 7)
    for e in range(0, 8):
        expect = c[e] if e < len(c) else 0
        if 3**e <= 3**7:
            assert series[3**e] == expect


@pytest.mark.parametrize("q", [3, 5, 7, 11, 13, 19, 23, 29, 43, 47, 53])
def test_factorization_routes_pass(q):
    rep = verify_factorization(q, 3000)
    assert rep.ok, (q, [(r.name, r.first_mismatch) for r in rep.routes if not r.ok])
    assert rep.first_mismatch is None
    assert len(rep.routes) >= 1


def test_q3_has_two_routes():
    rep = verify_factorization(3, 1000)
    assert len(rep.routes) == 2
    assert rep.ok


def test_mod120_branches_carry_extra_route():
    # +-19/+-29 and +-43/+-53 mod 120 verify both the combined factor and the
    # finer split, so at least two routes appear
    for q in (19, 29, 43, 53):
        rep = verify_factorization(q, 1500)
        assert len(rep.routes) >= 2
        assert rep.ok


def test_factorization_detects_poisoned_table():
    # a corrupted character value must surface as a first_mismatch
    q = 7
    direct = tau_char_sieve(q, 400)
    vals = np.array(direct.values, copy=True)
    vals[101] = -vals[101]
    poisoned = CoeffSeries.from_values(vals)
    good = dirichlet_convolve(direct, ones_series(400))
    bad = dirichlet_convolve(poisoned, ones_series(400))
    miss = good.first_mismatch(bad)
    assert miss == 101
