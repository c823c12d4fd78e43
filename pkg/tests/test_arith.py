import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gre.arith import (
    MAX_SIEVE_LIMIT,
    build_factor_table,
    divisors,
    factorize,
    mobius,
    num_divisors,
    omega,
    primes_in_ap,
    totient,
    von_mangoldt,
)
from gre.errors import InvalidArgument, OutOfRange, ResourceError


def trial_factor(n):
    out, p = {}, 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@pytest.mark.parametrize("n, p", [(9, 3), (7, 7), (10, 2)])
def test_spf_small(n, p):
    assert build_factor_table(10).spf[n] == p


@pytest.mark.parametrize("limit", [0, 1, -5])
def test_bad_limit(limit):
    with pytest.raises(InvalidArgument):
        build_factor_table(limit)


def test_limit_too_large():
    with pytest.raises(ResourceError):
        build_factor_table(MAX_SIEVE_LIMIT + 1)


@pytest.mark.parametrize("n, mu", [(1, 1), (12, 0), (30, -1)])
def test_mobius_examples(small, n, mu):
    assert mobius(n, small) == mu


@pytest.mark.parametrize("n, phi", [(1, 1), (5, 4), (12, 4)])
def test_totient_examples(small, n, phi):
    assert totient(n, small) == phi
    assert phi == sum(1 for j in range(1, n + 1) if math.gcd(j, n) == 1)


def test_counting_functions(small):
    assert (omega(1, small), num_divisors(1, small), divisors(1, small)) == (0, 1, [1])
    assert num_divisors(12, small) == 6
    assert divisors(12, small) == [1, 2, 3, 4, 6, 12]
    assert 2 ** omega(12, small) == 4 <= num_divisors(12, small)


def test_out_of_range(small):
    for fn in (mobius, totient, omega, num_divisors, divisors):
        with pytest.raises(OutOfRange):
            fn(small.limit + 1, small)
        with pytest.raises(OutOfRange):
            fn(0, small)


@pytest.mark.parametrize(
    "args, expected",
    [((5, 4, 3, 100), [19, 29, 59]), ((2, 1, 2, 20), [3, 5])],
)
def test_primes_in_ap(args, expected):
    assert list(primes_in_ap(*args)) == expected


def test_primes_in_ap_bad_residue():
    with pytest.raises(InvalidArgument):
        primes_in_ap(4, 2, 1, 100)


def test_primes_in_ap_exhausted():
    ps = primes_in_ap(5, 4, 10, 100)
    assert ps.exhausted and list(ps) == [19, 29, 59, 79, 89]
    assert not primes_in_ap(5, 4, 3, 100).exhausted


@pytest.mark.parametrize("n, value", [(1, 0.0), (8, math.log(2)), (6, 0.0), (7, math.log(7))])
def test_von_mangoldt(small, n, value):
    assert von_mangoldt(n, small) == pytest.approx(value, abs=1e-15)


def test_mobius_sum_identity(small):
    mu = small.mobius_array
    # sum_{d | n} mu(d) = [n = 1], via a vectorized divisor sum
    acc = np.zeros(small.limit + 1, dtype=np.int64)
    for d in range(1, small.limit + 1):
        acc[d::d] += mu[d]
    assert acc[1] == 1 and not acc[2:].any()


def test_totient_sum_identity(small):
    phi = small.totient_array
    acc = np.zeros(small.limit + 1, dtype=np.int64)
    for d in range(1, small.limit + 1):
        acc[d::d] += phi[d]
    assert np.array_equal(acc[1:], np.arange(1, small.limit + 1))


def test_bulk_arrays_match_scalar(small):
    for n in range(1, 2001):
        assert small.mobius_array[n] == mobius(n, small)
        assert small.totient_array[n] == totient(n, small)
        assert small.omega_array[n] == omega(n, small)
        assert small.num_divisors_array[n] == num_divisors(n, small)


def test_factorization_agrees_with_trial_division(t):
    rng = np.random.default_rng(0)
    for n in rng.integers(1, 10**6 + 1, size=1000):
        n = int(n)
        assert dict(factorize(n, t).factors) == trial_factor(n)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 10**4))
def test_spf_is_least_prime_factor(small, n):
    p = int(small.spf[n])
    if n == 1:
        assert p == 1
    else:
        assert n % p == 0 and min(trial_factor(n)) == p


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 10**4))
def test_divisors_properties(small, n):
    ds = divisors(n, small)
    assert ds[0] == 1 and ds[-1] == n
    assert all(a < b for a, b in zip(ds, ds[1:]))
    assert ds == [d for d in range(1, n + 1) if n % d == 0]
    assert len(ds) == num_divisors(n, small)
    assert 2 ** omega(n, small) <= len(ds)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 100), st.integers(1, 100))
def test_multiplicativity(small, m, n):
    if math.gcd(m, n) == 1:
        assert mobius(m * n, small) == mobius(m, small) * mobius(n, small)
        assert totient(m * n, small) == totient(m, small) * totient(n, small)
