import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from primeorder.numtheory import (ArithmeticTable, coprime_residues, divisors, euler_phi,
                                  factorize, is_prime, mobius, ramanujan_sum,
                                  ramanujan_sum_direct, segmented_sieve)

from conftest import trial_division_is_prime


def test_sieve_first_hundred():
    iv = segmented_sieve(1, 99)
    assert iv.N == 25
    assert int(iv.primes[-1]) == 97
    assert iv.primes.tolist() == [p for p in range(2, 101) if trial_division_is_prime(p)]


def test_sieve_single_site():
    assert segmented_sieve(2, 1).primes.tolist() == [3]


def test_sieve_reconstruction_interval_count():
    iv = segmented_sieve(10**6, 510510)
    assert abs(iv.N / (510510 / math.log(10**6)) - 1) < 0.03
    # spot check a sub-block by trial division
    sub = [p for p in iv.primes.tolist() if p <= 10**6 + 10**4]
    assert sub == [n for n in range(10**6 + 1, 10**6 + 10**4 + 1) if trial_division_is_prime(n)]


def test_sieve_interval_is_half_open():
    # 7 is excluded as the left end, 11 included as the right end
    assert segmented_sieve(7, 4).primes.tolist() == [11]


def test_sieve_overflow():
    with pytest.raises(OverflowError):
        segmented_sieve(10**13, 10)


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=2, max_value=10**9 - 1000))
def test_sieve_matches_trial_division(M):
    iv = segmented_sieve(M, 1000)
    expected = [n for n in range(M + 1, M + 1001) if is_prime(n)]
    assert iv.primes.tolist() == expected
    assert np.all(np.diff(iv.primes.astype(np.int64)) > 0)


@pytest.mark.parametrize("n,mu", [(1, 1), (4, 0), (30, -1), (2, -1), (6, 1), (12, 0)])
def test_mobius_values(n, mu):
    assert mobius(n) == mu


@pytest.mark.parametrize("n,phi", [(1, 1), (15, 8), (12, 4), (97, 96)])
def test_phi_values(n, phi):
    assert euler_phi(n) == phi


@pytest.mark.parametrize("n", [1, 3, 15, 105, 999])
def test_phi_doubling_odd(n):
    assert euler_phi(2 * n) == euler_phi(n)


def test_domain_errors():
    for fn in (mobius, euler_phi):
        with pytest.raises(ValueError):
            fn(0)


@pytest.mark.parametrize("n,expected", [(1000733, False), (1001423, False), (2, True),
                                        (10**9 + 7, True), (0, False), (1, False),
                                        (18446744073709551557, True),  # largest 64-bit prime
                                        (3215031751, False)])  # strong pseudoprime to 2,3,5,7
def test_is_prime(n, expected):
    assert is_prime(n) is expected


def test_is_prime_agrees_with_trial_division():
    assert all(is_prime(n) == trial_division_is_prime(n) for n in range(0, 5000))


def test_paper_false_positives_factor():
    assert factorize(1000733) == [809, 1237]
    assert factorize(1001423) == [887, 1129]


@pytest.mark.parametrize("q,r,val", [(1, 17, 1), (6, 0, 2), (3, 2, -1), (12, 0, 4), (5, 5, 4)])
def test_ramanujan_sum_values(q, r, val):
    assert ramanujan_sum(q, r) == val


def test_ramanujan_sum_integral_and_matches_phase_sum():
    for q in range(1, 501, 7):
        for r in range(-500, 501, 37):
            direct = ramanujan_sum_direct(q, r)
            assert abs(direct - round(direct)) < 1e-9
            assert direct == pytest.approx(ramanujan_sum(q, r), abs=1e-8)


def test_coprime_residues():
    assert coprime_residues(1) == [1]
    assert coprime_residues(6) == [1, 5]
    assert coprime_residues(15) == [m for m in range(1, 15) if math.gcd(m, 15) == 1]
    assert len(coprime_residues(15)) == 8


@pytest.fixture(scope="module")
def table():
    return ArithmeticTable(10**4)


def test_table_matches_scalar_functions(table):
    for n in range(1, 2000):
        assert table.mu[n] == mobius(n)
        assert table.phi[n] == euler_phi(n)
        assert table.squarefree[n] == (mobius(n) != 0)


def test_table_is_read_only(table):
    with pytest.raises(ValueError):
        table.mu[3] = 5


def test_totient_divisor_sum(table):
    for n in range(1, 10**4 + 1):
        assert sum(int(table.mu[d]) * (n // d) for d in divisors(n)) == table.phi[n]


def test_mobius_inversion(table):
    for t in range(1, 10**4 + 1):
        assert sum(int(table.mu[d]) for d in divisors(t)) == (1 if t == 1 else 0)


@given(st.integers(1, 3000), st.integers(1, 3000))
def test_phi_multiplicative(a, b):
    if math.gcd(a, b) == 1:
        assert euler_phi(a * b) == euler_phi(a) * euler_phi(b)
        assert mobius(a * b) == mobius(a) * mobius(b)
    assert euler_phi(a) <= a


def test_odd_squarefree(table):
    ns = table.odd_squarefree(30).tolist()
    assert ns == [1, 3, 5, 7, 11, 13, 15, 17, 19, 21, 23, 29]
