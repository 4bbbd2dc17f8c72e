"""Arithmetic kernels: sieving, multiplicative functions, primality tests
and Ramanujan sums.

Everything here is pure.  The :class:`ArithmeticTable` is built once with a
linear sieve and is safe to share between threads because its arrays are
marked read-only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

# Largest interval end accepted by the sieve.  Positions are stored as
# unsigned 64-bit integers, but the base sieve up to sqrt(M+L) should stay
# at desk scale.
MAX_POSITION = 10**12 + 10**9


@dataclass(frozen=True)
class PrimeInterval:
    """Primes p with M < p <= M + L."""

    M: int
    L: int
    primes: np.ndarray = field(repr=False)

    @property
    def N(self) -> int:
        return int(self.primes.size)

    def occupancy(self) -> np.ndarray:
        """Boolean array of length L; entry i is True when M+1+i is prime."""
        occ = np.zeros(self.L, dtype=bool)
        occ[(self.primes - (self.M + 1)).astype(np.int64)] = True
        return occ


def sieve_upto(n: int) -> np.ndarray:
    """Boolean primality flags for 0..n (plain Eratosthenes)."""
    flags = np.ones(max(n, 1) + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return flags[: n + 1]


def primes_upto(n: int) -> np.ndarray:
    return np.flatnonzero(sieve_upto(n)).astype(np.int64)


def _check_interval(M: int, L: int) -> None:
    if M < 0 or L < 0:
        raise ValueError(f"interval must have M >= 0 and L >= 0, got M={M}, L={L}")
    if M + L > MAX_POSITION:
        raise OverflowError(f"M+L={M + L} exceeds supported range {MAX_POSITION}")


def interval_occupancy(M: int, L: int, segment: int = 1 << 24) -> np.ndarray:
    """Boolean occupancy of the integers M+1, ..., M+L (True for primes).

    The work is split into segments of ``segment`` integers so memory for the
    crossing-off pass stays bounded; the returned array itself has length L.
    """
    M, L = int(M), int(L)
    _check_interval(M, L)
    occ = np.ones(L, dtype=bool)
    if L == 0:
        return occ
    hi = M + L
    base = primes_upto(math.isqrt(hi))
    lo = M + 1
    for s0 in range(0, L, segment):
        a = lo + s0
        b = min(lo + s0 + segment, hi + 1)  # exclusive
        block = occ[s0 : s0 + (b - a)]
        for p in base:
            p = int(p)
            if p * p >= b:
                break
            start = max(p * p, ((a + p - 1) // p) * p)
            if start < b:
                block[start - a :: p] = False
    if lo <= 1:
        occ[: 2 - lo] = False
    return occ


def segmented_sieve(M: int, L: int) -> PrimeInterval:
    """Return the primes in (M, M+L] using a base sieve up to sqrt(M+L).

    Raises
    ------
    OverflowError
        If M + L is beyond the supported position range.
    """
    occ = interval_occupancy(M, L)
    primes = (np.flatnonzero(occ) + (M + 1)).astype(np.uint64)
    return PrimeInterval(int(M), int(L), primes)


def _factor_small(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def factorize(n: int) -> list[int]:
    """Prime factors of n with multiplicity, by trial division."""
    if n < 1:
        raise ValueError("factorize needs n >= 1")
    return [p for p, e in sorted(_factor_small(n).items()) for _ in range(e)]


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("mobius is defined for n >= 1")
    f = _factor_small(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("euler_phi is defined for n >= 1")
    out = n
    for p in _factor_small(n):
        out = out // p * (p - 1)
    return out


def is_squarefree(n: int) -> bool:
    return mobius(n) != 0


_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n < 3.3e24 (so all 64-bit n)."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def coprime_residues(n: int) -> list[int]:
    """Sorted residues 1 <= m < n coprime to n; ``[1]`` for n = 1."""
    if n < 1:
        raise ValueError("coprime_residues needs n >= 1")
    if n == 1:
        return [1]
    return [m for m in range(1, n) if math.gcd(m, n) == 1]


def ramanujan_sum(q: int, r: int) -> float:
    """Ramanujan's sum c_q(r) = sum over a coprime to q of cos(2 pi a r / q).

    Evaluated exactly through the divisor formula
    c_q(r) = sum_{d | gcd(q, r)} mu(q/d) d, so the result is an integer.
    """
    if q < 1:
        raise ValueError("ramanujan_sum needs q >= 1")
    g = math.gcd(q, abs(int(r)))  # gcd(q, 0) = q
    total = 0
    for d in _divisors(g):
        total += mobius(q // d) * d
    return float(total)


def ramanujan_sum_direct(q: int, r: int) -> float:
    """c_q(r) from its defining phase sum (used as a cross-check)."""
    a = np.array(coprime_residues(q), dtype=float)
    z = np.exp(2j * np.pi * a * r / q).sum()
    if abs(z.imag) > 1e-9 * max(1.0, len(a)):
        raise ArithmeticError(f"imaginary part {z.imag} did not cancel")
    return float(z.real)


@lru_cache(maxsize=4096)
def _divisors(n: int) -> tuple[int, ...]:
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return tuple(small + large[::-1])


def divisors(n: int) -> list[int]:
    return list(_divisors(int(n)))


class ArithmeticTable:
    """mu(n), phi(n) and the square-free flag for all n <= limit.

    Built with a linear sieve in O(limit).  The arrays are read-only so an
    instance can be shared freely.
    """

    def __init__(self, limit: int):
        if limit < 1:
            raise ValueError("limit must be >= 1")
        self.limit = int(limit)
        n = self.limit
        mu = np.zeros(n + 1, dtype=np.int8)
        phi = np.zeros(n + 1, dtype=np.int64)
        # smallest prime factor via a vectorised sieve, then a linear pass
        spf = np.zeros(n + 1, dtype=np.int64)
        for p in range(2, math.isqrt(n) + 1):
            if spf[p] == 0:
                block = spf[p * p :: p]
                block[block == 0] = p
        idx = np.arange(n + 1)
        prime = (spf == 0) & (idx >= 2)
        spf[prime] = idx[prime]
        mu[1] = 1
        phi[1] = 1
        spf_l = spf.tolist()
        mu_l = mu.tolist()
        phi_l = phi.tolist()
        for k in range(2, n + 1):
            p = spf_l[k]
            rest = k // p
            if rest % p == 0:
                mu_l[k] = 0
                phi_l[k] = phi_l[rest] * p
            else:
                mu_l[k] = -mu_l[rest]
                phi_l[k] = phi_l[rest] * (p - 1)
        self.mu = np.array(mu_l, dtype=np.int8)
        self.phi = np.array(phi_l, dtype=np.int64)
        self.squarefree = self.mu != 0
        self.squarefree[0] = False
        for arr in (self.mu, self.phi, self.squarefree):
            arr.setflags(write=False)

    def odd_squarefree(self, n_max: int | None = None) -> np.ndarray:
        """Odd square-free integers 1 <= n <= n_max."""
        top = self.limit if n_max is None else min(int(n_max), self.limit)
        n = np.arange(1, top + 1, 2)
        return n[self.squarefree[n]]


@lru_cache(maxsize=8)
def shared_table(limit: int) -> ArithmeticTable:
    """Cached table; callers share one instance per limit."""
    return ArithmeticTable(limit)
