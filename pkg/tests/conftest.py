import numpy as np
import pytest

from primeorder.configs import primes_config


@pytest.fixture(scope="session")
def primes_1e6():
    """Primes in (10^6, 2*10^6]."""
    return primes_config(10**6, 10**6)


def trial_division_is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def brute_eta(positions, length):
    k = 2 * np.pi * np.arange(length) / length
    return np.exp(-1j * np.outer(k, positions)).sum(axis=1)
