"""Sieve tables against brute-force oracles."""

import numpy as np
import pytest

from tauchar.errors import ArgumentError, ResourceLimitError
from tauchar.sieves import (
    CoeffSeries,
    LegendreChar,
    MAX_SIEVE_ENTRIES,
    build_factor_sieve,
    check_budget,
    divisor_count_sieve,
    identity_series,
    is_prime,
    legendre_symbol,
    liouville_sieve,
    mobius_sieve,
    ones_series,
    power_indicator_series,
    primes_up_to,
    tau_char_sieve,
)
from tauchar.sieves import _jacobi

N = 3000


def brute_tau(n):
    return sum(1 for d in range(1, n + 1) if n % d == 0)


def brute_mu(n):
    if n == 1:
        return 1
    m, out, p = n, 1, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            out = -out
        p += 1
    if m > 1:
        out = -out
    return out


def brute_omega_parity(n):
    count, m, p = 0, n, 2
    while p * p <= m:
        while m % p == 0:
            m //= p
            count += 1
        p += 1
    if m > 1:
        count += 1
    return -1 if count % 2 else 1


def euler_criterion(a, q):
    # (a/q) = a^((q-1)/2) mod q, mapped to {-1, 0, 1}
    r = pow(a % q, (q - 1) // 2, q)
    return r - q if r > 1 else r


def test_divisor_count_sieve_matches_brute_force():
    tau = divisor_count_sieve(N)
    for n in range(1, N + 1):
        assert tau[n] == brute_tau(n), n


def test_mobius_sieve_matches_brute_force():
    mu = mobius_sieve(N)
    for n in range(1, N + 1):
        assert mu[n] == brute_mu(n), n


def test_liouville_sieve_matches_brute_force():
    lv = liouville_sieve(N)
    for n in range(1, N + 1):
        assert lv[n] == brute_omega_parity(n), n


def test_power_indicator_series():
    a3 = power_indicator_series(3, 10**4)
    cubes = {k**3 for k in range(1, 22)}
    for n in range(1, 10**4 + 1):
        assert a3[n] == (1 if n in cubes else 0)


def test_ones_and_identity_series():
    ones = ones_series(50)
    ident = identity_series(50)
    assert all(ones[n] == 1 for n in range(1, 51))
    assert ident[1] == 1 and all(ident[n] == 0 for n in range(2, 51))


@pytest.mark.parametrize("q", [3, 5, 7, 11, 13, 23, 199])
def test_legendre_table_against_euler_criterion(q):
    char = LegendreChar(q)
    t = char.table
    for a in range(q):
        assert int(t[a]) == euler_criterion(a, q), (q, a)


def test_legendre_table_against_jacobi_all_small_q():
    for q in range(3, 200):
        if not is_prime(q):
            continue
        t = LegendreChar(q).table
        for a in range(q):
            assert int(t[a]) == _jacobi(a, q), (q, a)


def test_legendre_char_rejects_non_prime_and_even():
    for bad in (1, 2, 4, 9, 15, 91):
        with pytest.raises(ArgumentError):
            LegendreChar(bad)


def test_legendre_symbol_is_multiplicative():
    rng = np.random.default_rng(5)
    for q in (7, 13, 31):
        char = LegendreChar(q)
        for _ in range(200):
            a, b = map(int, rng.integers(1, 10**6, size=2))
            assert legendre_symbol(a * b, char) == legendre_symbol(
                a, char
            ) * legendre_symbol(b, char)


def test_tau_char_sieve_matches_pointwise_definition():
    for q in (3, 5, 7, 11, 13):
        char = LegendreChar(q)
        series = tau_char_sieve(char, N)
        tau = divisor_count_sieve(N)
        for n in range(1, N + 1):
            assert series[n] == euler_criterion(tau[n], q), (q, n)


def test_tau_char_is_multiplicative_on_coprime_pairs():
    rng = np.random.default_rng(17)
    series = tau_char_sieve(LegendreChar(7), 10**6)
    checked = 0
    while checked < 300:
        a, b = map(int, rng.integers(2, 1000, size=2))
        if np.gcd(a, b) != 1:
            continue
        assert series[a * b] == series[a] * series[b]
        checked += 1


def test_factor_sieve_factorizations_multiply_back():
    fs = build_factor_sieve(2000)
    for n in range(2, 2001):
        prod = 1
        for p, e in fs.factorize(n):
            assert is_prime(p)
            prod *= p**e
        assert prod == n


def test_primes_up_to_oracle():
    ps = primes_up_to(1000)
    expected = [n for n in range(2, 1001) if all(n % d for d in range(2, n))]
    assert list(ps) == expected


def test_budget_errors():
    with pytest.raises(ResourceLimitError):
        check_budget(MAX_SIEVE_ENTRIES + 1)
    with pytest.raises(ResourceLimitError):
        tau_char_sieve(LegendreChar(5), MAX_SIEVE_ENTRIES + 1)


def test_coeff_series_prefix_and_mismatch():
    a = CoeffSeries.from_values([0, 1, -1, 0, 2])
    b = CoeffSeries.from_values([0, 1, -1, 1, 2])
    assert a.first_mismatch(b) == 3
    assert a.first_mismatch(a) is None
    assert a.prefix_sum_at(4) == 2


def test_coeff_series_rejects_wrong_shapes():
    with pytest.raises(ArgumentError):
        CoeffSeries(3, np.zeros(3, dtype=np.int64))  # needs limit + 1 entries
    with pytest.raises(ArgumentError):
        CoeffSeries(0, np.zeros(1, dtype=np.int64))
