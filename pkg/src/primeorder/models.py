"""Closed-form predictions.

Covers the limit-periodic Bragg-peak table of the primes, the
Hardy-Littlewood singular series for prime pairs in three equivalent forms,
the period-doubling chain, and the structure factor conjectured for the
Riemann zeta zeros.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

from .numtheory import ArithmeticTable, euler_phi, mobius, primes_upto, shared_table

TWIN_PRIME_CONSTANT = 0.66016181584686957  # C2, product over odd primes


# ------------------------------------------------------------------ peak table

@dataclass(frozen=True)
class PeakTable:
    """Bragg peaks k = m pi / n of the primes on (0, pi].

    ``n`` runs over odd square-free integers, ``m`` over 0 < m < n coprime
    to n; n = 1 contributes the single peak at k = pi.  Every peak with
    n > 1 has a mirror image at 2 pi - k, which ``multiplicity`` (2 for
    n > 1, 1 for the peak at pi) accounts for when summing over a full
    period.  ``weight = 1/phi(n)^2`` is the peak height divided by N.
    """

    n: np.ndarray
    m: np.ndarray
    k: np.ndarray
    weight: np.ndarray
    n_max: int

    @property
    def multiplicity(self) -> np.ndarray:
        return np.where(self.n == 1, 1, 2)

    def __len__(self) -> int:
        return int(self.n.size)

    def to_csv(self, path, header: str = "") -> None:
        data = np.column_stack([self.n, self.m, self.k, self.weight])
        with open(path, "w") as fh:
            fh.write(header)
            fh.write("n,m,k,weight\n")
            np.savetxt(fh, data, delimiter=",", fmt=["%d", "%d", "%.17g", "%.17g"])


def prime_peak_table(n_max: int, table: ArithmeticTable | None = None) -> PeakTable:
    """All peaks with odd square-free n <= n_max."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    T = table if table is not None and table.limit >= n_max else shared_table(max(n_max, 2))
    ns, ms = [np.array([1])], [np.array([1])]
    for n in T.odd_squarefree(n_max)[1:]:
        n = int(n)
        m = np.arange(1, n)
        m = m[np.gcd(m, n) == 1]
        ns.append(np.full(m.size, n))
        ms.append(m)
    n = np.concatenate(ns).astype(np.int64)
    m = np.concatenate(ms).astype(np.int64)
    w = 1.0 / T.phi[n].astype(float) ** 2
    return PeakTable(n, m, np.pi * m / n, w, int(n_max))


def predicted_peak_height(N: float, m: int, n: int) -> float:
    """Peak height S(pi m / n) = N mu(2n)^2 / phi(2n)^2.

    Raises ValueError unless gcd(m, n) = 1; reduce the fraction first.
    """
    if n < 1 or math.gcd(m, n) != 1:
        raise ValueError(f"m/n = {m}/{n} is not in lowest terms")
    mu = mobius(2 * n)
    return N * mu * mu / euler_phi(2 * n) ** 2


# ------------------------------------------------------------ singular series

@dataclass(frozen=True)
class SingularSeriesValue:
    r: int
    value: float
    method: str
    truncation: int
    odd_r: bool = False

    def __float__(self) -> float:
        return self.value


def _ramanujan_vec(n: np.ndarray, r: int, T: ArithmeticTable) -> np.ndarray:
    """c_n(r) for an array of n via c_n(r) = mu(n/g) phi(n) / phi(n/g), g = gcd(n, r)."""
    g = np.gcd(n, abs(int(r))) if r != 0 else n
    q = n // g
    return T.mu[q].astype(float) * T.phi[n] / T.phi[q]


# Above this totient the inner coprime-residue sum is replaced by the
# Ramanujan-sum identity.
_DIRECT_PHI_LIMIT = 64


def hl_g2(r: int, n_max: int = 10_000, table: ArithmeticTable | None = None) -> float:
    """Pair correlation of the primes from the peak table.

    g2(r) = 1 + sum over odd square-free n <= n_max of phi(n)^-2 times the
    sum over 0 < m < 2n with gcd(m, n) = 1 of cos(r m pi / n).  The n = 1
    term is cos(r pi).  For even r the inner sum is 2 c_n(r); for small
    phi(n) it is evaluated directly.  The limit is the Hardy-Littlewood
    constant for the pair {0, r}.  Odd r give 0 exactly and trigger a
    warning.
    """
    r = int(r)
    if r == 0:
        raise ValueError("r must be nonzero")
    if r % 2:
        warnings.warn("hl_g2 called with odd r; the series vanishes", stacklevel=2)
    T = table if table is not None and table.limit >= n_max else shared_table(max(n_max, 2))
    ns = T.odd_squarefree(n_max)
    total = 1.0 + math.cos(r * math.pi)
    ns = ns[ns > 1]
    phi = T.phi[ns]
    small = ns[phi <= _DIRECT_PHI_LIMIT]
    for n in small:
        n = int(n)
        m = np.arange(1, 2 * n)
        m = m[np.gcd(m, n) == 1]
        z = np.exp(1j * r * m * np.pi / n).sum()
        if abs(z.imag) > 1e-9:
            raise ArithmeticError("imaginary part failed to cancel")
        total += z.real / T.phi[n] ** 2
    big = ns[phi > _DIRECT_PHI_LIMIT]
    if big.size and r % 2 == 0:
        total += float(np.sum(2 * _ramanujan_vec(big, r, T) / T.phi[big].astype(float) ** 2))
    return float(total)


@lru_cache(maxsize=16)
def _twin_constant(p_max: int) -> float:
    p = primes_upto(p_max)[1:].astype(float)  # odd primes
    return float(np.exp(np.sum(np.log1p(-1.0 / (p - 1.0) ** 2))))


def singular_series_pair(r: int, p_max: int = 10**7) -> SingularSeriesValue:
    """Euler-product form 2 C2 prod_{odd p | r} (p-1)/(p-2), truncated at p_max."""
    r = int(r)
    if r == 0:
        raise ValueError("r must be nonzero")
    if r % 2:
        return SingularSeriesValue(r, 0.0, "euler-product", p_max, True)
    val = 2 * _twin_constant(p_max)
    rr = abs(r)
    while rr % 2 == 0:
        rr //= 2
    p = 3
    while p * p <= rr:
        if rr % p == 0:
            val *= (p - 1) / (p - 2)
            while rr % p == 0:
                rr //= p
        p += 2
    if rr > 1:
        val *= (rr - 1) / (rr - 2)
    return SingularSeriesValue(r, val, "euler-product", p_max)


def singular_series_ramanujan(r: int, q_max: int = 10_000,
                              table: ArithmeticTable | None = None) -> SingularSeriesValue:
    """Series form sum over square-free q <= q_max of mu(q)^2 c_q(r) / phi(q)^2."""
    T = table if table is not None and table.limit >= q_max else shared_table(max(q_max, 2))
    q = np.arange(1, q_max + 1)
    q = q[T.squarefree[q]]
    val = float(np.sum(_ramanujan_vec(q, r, T) / T.phi[q].astype(float) ** 2))
    return SingularSeriesValue(int(r), val, "ramanujan-series", q_max, bool(r % 2))


def pair_count_prediction(r: int, M: float, L: float, g2: float | None = None) -> float:
    """Number of prime pairs (p, p + r) in an interval of length L at height M,
    as L * (2 / ln^2 M) * g2, with g2 defaulting to the converged peak-table value.
    """
    if g2 is None:
        g2 = singular_series_pair(r).value
    return L * 2.0 / math.log(M) ** 2 * g2


def hardy_littlewood_pair_count(r: int, M: float, L: float) -> float:
    """Classical Hardy-Littlewood estimate: singular series times L / ln^2 M."""
    return singular_series_pair(r).value * L / math.log(M) ** 2


# -------------------------------------------------------- period-doubling chain

def pd_structure_factor(n_max: int, k_max: float = 2 * np.pi):
    """Bragg peaks of the a-sites of the period-doubling chain on (0, k_max].

    Returns ``(k, weight)`` arrays sorted by k: the dyadic peaks
    (2m-1) pi / 2^(n-1), n = 1..n_max, with weight (4 pi / 3) 2^(-2n), plus
    peaks at 2 pi m with weight 4 pi / 3.  Weights are the coefficients of
    the delta functions for unit lattice spacing.
    """
    ks, ws = [], []
    for n in range(1, n_max + 1):
        step = np.pi / 2 ** (n - 1)
        m = np.arange(1, int(k_max / step / 2 + 1) + 1)
        k = (2 * m - 1) * step
        k = k[k <= k_max * (1 + 1e-12)]
        ks.append(k)
        ws.append(np.full(k.size, 4 * np.pi / 3 * 2.0 ** (-2 * n)))
    kint = 2 * np.pi * np.arange(1, int(k_max / (2 * np.pi) * (1 + 1e-12)) + 1)
    ks.append(kint)
    ws.append(np.full(kint.size, 4 * np.pi / 3))
    k = np.concatenate(ks)
    w = np.concatenate(ws)
    order = np.argsort(k, kind="stable")
    return k[order], w[order]


def pd_number_variance(R, n_max: int = 60, m_max: int = 2000):
    """Number variance of the period-doubling a-sites, truncated double sum.

    sigma^2(R) = 8/(9 pi^2) [ sum_m sin^2(2 m pi R)/m^2
                  + sum_{n<=n_max} sum_{m<=m_max} sin^2((2m-1) pi R/2^(n-1))/(2m-1)^2 ]
    """
    R_arr = np.atleast_1d(np.asarray(R, dtype=float))
    m = np.arange(1, m_max + 1, dtype=float)
    odd = 2 * m - 1
    out = np.empty(R_arr.shape)
    for i, RR in enumerate(R_arr.ravel()):
        first = np.sum(np.sin(2 * m * np.pi * RR) ** 2 / m**2)
        second = 0.0
        for n in range(1, n_max + 1):
            second += np.sum(np.sin(odd * np.pi * RR / 2 ** (n - 1)) ** 2 / odd**2)
        out.flat[i] = 8 / (9 * np.pi**2) * (first + second)
    return out if np.ndim(R) else float(out[0])


def pd_number_variance_closed(R, n_max: int = 80):
    """Same quantity with the inner m sums in closed form.

    The first sum is the parabola pi^2 u (1-u)/2 with u = {2R}; each inner
    odd-m sum is the periodised triangle (pi/4) dist(x, pi Z).  Truncation
    error is then only from n_max and is below 2^-n_max R.
    """
    R = np.asarray(R, dtype=float)
    u = np.mod(2 * R, 1.0)
    first = np.pi**2 / 2 * u * (1 - u)
    second = np.zeros_like(R)
    for n in range(1, n_max + 1):
        y = np.mod(np.pi * R / 2.0 ** (n - 1), np.pi)
        second = second + np.pi / 4 * np.minimum(y, np.pi - y)
    out = 8 / (9 * np.pi**2) * (first + second)
    return out if out.ndim else float(out)


def pd_variance_bounds(R):
    """Logarithmic envelope (4/(9 pi^2)) ln R and (4/(3 pi^2)) ln R."""
    lnR = np.log(R)
    return 4 / (9 * np.pi**2) * lnR, 4 / (3 * np.pi**2) * lnR


def pd_cumulative_intensity(K, n_terms: int = 64):
    """Z(K) = 2 * integral_0^K S of the period-doubling chain.

    Evaluated with the staircase formula
    (8 pi / 3) sum_n 2^(-2n) floor(1/2 + 2^(n-2) K / pi)
    plus the peaks at multiples of 2 pi.  Terms with n < log2(2 pi / K)
    vanish automatically.  The result is self-similar: Z(K/2) = Z(K)/4 for
    0 < K < pi, and Z(K)/K^2 oscillates between 1/(3 pi) and 1/pi.
    """
    K_arr = np.atleast_1d(np.asarray(K, dtype=float))
    if np.any(K_arr <= 0):
        raise ValueError("K must be positive")
    n = np.arange(1, n_terms + 1, dtype=float)
    cnt = np.floor(0.5 + 2.0 ** (n[None, :] - 2) * K_arr.ravel()[:, None] / np.pi)
    Z = 8 * np.pi / 3 * (cnt * 2.0 ** (-2 * n[None, :])).sum(axis=1)
    Z += 8 * np.pi / 3 * np.floor(K_arr.ravel() / (2 * np.pi))
    Z = Z.reshape(K_arr.shape)
    return Z if np.ndim(K) else float(Z[0])


def pd_cumulative_bounds(K):
    """The quadratic envelope K^2/(6 pi), K^2/(2 pi) stated for Z(K).

    The staircase formula itself lies between twice these values; see
    :func:`pd_cumulative_intensity`.
    """
    K = np.asarray(K, dtype=float)
    return K**2 / (6 * np.pi), K**2 / (2 * np.pi)


# ----------------------------------------------------------------- zeta zeros

def zeta_structure_factor(k):
    """S(k) = |k| / (2 pi) for |k| <= 2 pi and 1 beyond."""
    k = np.abs(np.asarray(k, dtype=float))
    out = np.minimum(k / (2 * np.pi), 1.0)
    return out if out.ndim else float(out)


def zeta_tau() -> float:
    """tau = (1/(2 pi)) integral (S - 1)^2 dk with unit density, by quadrature.

    The integrand vanishes for |k| > 2 pi, so the range is [-2 pi, 2 pi].
    """
    val, _ = integrate.quad(lambda k: (zeta_structure_factor(k) - 1.0) ** 2,
                            0.0, 2 * np.pi, epsabs=1e-13, epsrel=1e-13)
    return 2 * val / (2 * np.pi)


# ------------------------------------------------------ primes: cumulative Z

@dataclass(frozen=True)
class CumulativeModel:
    K: np.ndarray
    peak_sum: np.ndarray
    smooth: np.ndarray
    below_cutoff: np.ndarray  # K < pi / n_max, where both forms are set to 0


def prime_cumulative_model(K, M: float, n_max: int | None = None) -> CumulativeModel:
    """Z(K) of the primes from the peak table, and its smooth approximation.

    peak_sum: Z = 4 pi rho * sum over peaks m pi / n < K of 1/phi(n)^2,
              with rho = 1/ln M and n <= n_max.
    smooth:   Z = (K / ln M) (ln n_max - ln(pi / K)).

    The sum over odd square-free n of 1/phi(n) grows like (1/2) ln x, so the
    peak sum tends to twice the smooth expression.  K below pi / n_max is
    flagged and both forms are 0 there.
    """
    lnM = math.log(M)
    if n_max is None:
        n_max = max(1, int(100 * lnM))
    K_arr = np.atleast_1d(np.asarray(K, dtype=float))
    tab = prime_peak_table(n_max)
    order = np.argsort(tab.k, kind="stable")
    kk = tab.k[order]
    cw = np.concatenate([[0.0], np.cumsum(tab.weight[order])])
    below = K_arr < np.pi / n_max
    peak = 4 * np.pi / lnM * cw[np.searchsorted(kk, K_arr, side="left")]
    smooth = K_arr / lnM * (math.log(n_max) - np.log(np.pi / K_arr))
    peak = np.where(below, 0.0, peak)
    smooth = np.where(below, 0.0, smooth)
    return CumulativeModel(K_arr, peak, smooth, below)


# --------------------------------------------------------------- Fourier kernel

def variance_kernel(k, R):
    """Kernel 2 sin^2(kR) / (R k^2) of the Fourier form of the number variance.

    Its limit at k = 0 is 2R.  With this kernel,
    sigma^2(R) = (rho R / pi) * integral S(k) kernel(k, R) dk reproduces the
    direct-space window variance.
    """
    k = np.asarray(k, dtype=float)
    out = np.empty_like(k)
    small = np.abs(k) < 1e-12
    out[small] = 2 * R
    ks = k[~small]
    out[~small] = 2 * np.sin(ks * R) ** 2 / (R * ks**2)
    return out
