"""Order and fluctuation statistics.

Number variance (direct windows and Fourier quadrature), the tau order
metric and its (M, L) phase map, the value distribution lambda(t) of S(k),
and prime counts in short random intervals compared with Poisson.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.fft as sfft
from scipy import stats as sstats

from .configs import PointConfiguration, primes_config
from .numtheory import interval_occupancy, primes_upto
from .spectral import Spectrum, structure_factor
from .models import variance_kernel


# ----------------------------------------------------------- number variance

@dataclass(frozen=True)
class VarianceCurve:
    R: np.ndarray
    sigma2: np.ndarray
    estimator: str
    window: str = ""


def number_variance_direct(config: PointConfiguration, R_list) -> VarianceCurve:
    """Variance of the count in windows of 2R consecutive sites.

    Every integer placement with the window fully inside the segment is used
    (no periodic wrap).  Counting uses prefix sums, O(length) per R.
    """
    R = np.asarray(R_list, dtype=float)
    cs = np.concatenate([[0], np.cumsum(config.occupancy(np.int64))])
    out = np.empty(R.size)
    for i, r in enumerate(R):
        w = int(round(2 * r))
        if w < 1 or w >= config.length:
            raise ValueError(f"window 2R={w} must satisfy 1 <= 2R < length")
        c = (cs[w:] - cs[:-w]).astype(float)
        out[i] = c.var()
    return VarianceCurve(R, out, "direct-window", "all placements inside the segment")


def number_variance_fourier(spectrum: Spectrum, R_list, aliased: bool = False) -> VarianceCurve:
    """sigma^2(R) = (rho R / pi) * integral S(k) kernel(k; R) dk on the grid.

    The kernel is 2 sin^2(kR)/(R k^2), integrated over the grid points of
    (-pi, pi] with the forward point excluded.  With ``aliased=True`` the
    kernel is summed over all 2 pi images, giving sin^2(kR)/(2R sin^2(k/2));
    for integer 2R this reproduces the periodic-window variance exactly.
    """
    R = np.asarray(R_list, dtype=float)
    Lg = spectrum.length
    j = np.arange(1, Lg)
    k = 2 * np.pi * np.where(j <= Lg // 2, j, j - Lg) / Lg
    S = spectrum.S[1:]
    rho = spectrum.N / Lg
    out = np.empty(R.size)
    for i, r in enumerate(R):
        if aliased:
            ker = np.sin(k * r) ** 2 / (2 * r * np.sin(k / 2) ** 2)
        else:
            ker = variance_kernel(k, r)
        out[i] = rho * r / np.pi * spectrum.dk * np.sum(S * ker)
    return VarianceCurve(R, out, "fourier", "aliased kernel" if aliased else "continuum kernel")


# ----------------------------------------------------------------------- tau

@dataclass(frozen=True)
class TauResult:
    tau: float
    f: float
    N_s: int
    grid_size: int
    kind: str

    @property
    def rho(self) -> float:
        """Points per unit length when the sites are the odd integers."""
        return self.f / 2

    @property
    def L(self) -> int:
        """Integer length spanned by N_s odd sites."""
        return 2 * self.N_s


def tau_from_S(S: np.ndarray, f: float) -> float:
    """(1/N_s) sum_{j=1}^{N_s-1} (S_j - (1-f))^2 for a full-circle grid of N_s points."""
    Ns = S.size
    d = S[1:] - (1.0 - f)
    return float(np.dot(d, d) / Ns)


def _half_tau(half_S: np.ndarray, Ns: int, f: float) -> float:
    # same sum using the half grid from a real transform and the symmetry S_j = S_{N_s-j}
    d = half_S[1:] - (1.0 - f)
    w = np.full(d.size, 2.0)
    if Ns % 2 == 0:
        w[-1] = 1.0
    return float(np.dot(w * d, d) / Ns)


def tau_discrete(config: PointConfiguration, sublattice: bool | None = None,
                 workers: int | None = None) -> TauResult:
    """Single-configuration tau order metric.

    The sum runs over the grid of the configuration's own lattice with N_s
    sites and occupation fraction f = N / N_s.  For the primes (the default
    when ``config.kind == 'primes'``) the configuration is first restricted
    to the odd sublattice, so N_s is about L/2 and f = 2 rho.  The grid is
    then k = j pi / N_s in integer units.
    """
    if sublattice is None:
        sublattice = config.kind == "primes"
    cfg = config.odd_sublattice() if sublattice else config
    if cfg.N == 0:
        return TauResult(float("nan"), 0.0, cfg.length, cfg.length, cfg.kind)
    Ns = cfg.length
    f = cfg.N / Ns
    eta = sfft.rfft(cfg.occupancy(), workers=workers)
    S = (eta.real**2 + eta.imag**2) / cfg.N
    return TauResult(_half_tau(S, Ns, f), f, Ns, Ns, cfg.kind)


def prime_tau(M: int, L: int) -> TauResult:
    return tau_discrete(primes_config(M, L))


@dataclass(frozen=True)
class TauMap:
    M: np.ndarray
    L: np.ndarray
    ln_tau: np.ndarray = field(repr=False)  # shape (len(M), len(L))


def tau_phase_map(M_list, L_list) -> TauMap:
    """ln tau of the primes in (M, M+L] for every (M, L) pair."""
    Ms = np.asarray(M_list, dtype=np.int64)
    Ls = np.asarray(L_list, dtype=np.int64)
    out = np.full((Ms.size, Ls.size), np.nan)
    for i, M in enumerate(Ms):
        # one sieve per M covers every L
        occ = interval_occupancy(int(M), int(Ls.max()))
        first = 0 if (M + 1) % 2 else 1
        for jdx, L in enumerate(Ls):
            sub = occ[first : int(L) : 2]
            N = int(sub.sum())
            if N == 0:
                continue
            eta = np.fft.rfft(sub.astype(float))
            S = (eta.real**2 + eta.imag**2) / N
            t = _half_tau(S, sub.size, N / sub.size)
            if t > 0:
                out[i, jdx] = math.log(t)
    return TauMap(Ms, Ls, out)


def smooth_monotone(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Least-squares nondecreasing fit of y against x (pool adjacent violators)."""
    order = np.argsort(x, kind="stable")
    vals: list[float] = []
    wts: list[float] = []
    sizes: list[int] = []
    for v in np.asarray(y, dtype=float)[order]:
        vals.append(v)
        wts.append(1.0)
        sizes.append(1)
        while len(vals) > 1 and vals[-2] > vals[-1]:
            w = wts[-2] + wts[-1]
            v2 = (vals[-2] * wts[-2] + vals[-1] * wts[-1]) / w
            n2 = sizes[-2] + sizes[-1]
            vals[-2:] = [v2]
            wts[-2:] = [w]
            sizes[-2:] = [n2]
    fitted = np.repeat(vals, sizes)
    out = np.empty_like(fitted)
    out[order] = fitted
    return out


def level_crossings(tmap: TauMap, level: float, smooth: bool = True):
    """For each M, the L at which ln tau first reaches ``level``.

    Each row is optionally replaced by its monotone (nondecreasing in ln L)
    least-squares fit before the crossing is located by linear interpolation
    in ln L.  Rows that never cross are skipped.

    Returns
    -------
    M, L_star : ndarray
    """
    x = np.log(tmap.L.astype(float))
    Ms, Lstar = [], []
    for i, M in enumerate(tmap.M):
        row = tmap.ln_tau[i]
        ok = np.isfinite(row)
        if ok.sum() < 2:
            continue
        y = smooth_monotone(x[ok], row[ok]) if smooth else row[ok]
        xs = x[ok]
        above = np.flatnonzero(y >= level)
        if above.size == 0 or above[0] == 0:
            continue
        a = above[0]
        x0, x1, y0, y1 = xs[a - 1], xs[a], y[a - 1], y[a]
        xc = x1 if y1 == y0 else x0 + (level - y0) * (x1 - x0) / (y1 - y0)
        Ms.append(M)
        Lstar.append(math.exp(xc))
    return np.array(Ms, dtype=float), np.array(Lstar)


def fit_log_squared(M, L_star):
    """Least-squares fit L = a ln^2 M through the origin.

    Returns ``(a, r2)``, where r2 is the coefficient of determination of the
    one-parameter fit, 1 - SS_res / SS_tot.
    """
    x = np.log(np.asarray(M, dtype=float)) ** 2
    y = np.asarray(L_star, dtype=float)
    a = float(np.dot(x, y) / np.dot(x, x))
    ss_res = float(np.sum((y - a * x) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    return a, 1.0 - ss_res / ss_tot


# ------------------------------------------------------------------ lambda(t)

@dataclass(frozen=True)
class CdfCurve:
    t: np.ndarray
    lam: np.ndarray
    lam_minus: np.ndarray


def _half_weights(length: int) -> np.ndarray:
    m = length // 2 + 1
    w = np.ones(m)
    w[0] = 0.5
    if length % 2 == 0:
        w[-1] = 0.5
    return w


def sk_cdf(spectrum: Spectrum, t_grid) -> CdfCurve:
    """Fraction of (0, pi) where S(k) > t, with and without the forward point.

    Grid points 0 <= j <= L/2 represent [0, pi]; the two endpoints carry
    half weight so the total weight is L/2.  With these weights the
    weighted sum of S is exactly L/2 (Parseval), which makes
    t * lambda(t) <= 1 an exact inequality on the grid.
    """
    t = np.asarray(t_grid, dtype=float)
    m = spectrum.length // 2 + 1
    S = spectrum.S[:m]
    w = _half_weights(spectrum.length)
    total = spectrum.length / 2
    order = np.argsort(S, kind="stable")
    Ss = S[order]
    tail = np.concatenate([np.cumsum(w[order][::-1])[::-1], [0.0]])
    idx = np.searchsorted(Ss, t, side="right")
    lam = tail[idx] / total
    lam_minus = lam - np.where(S[0] > t, w[0], 0.0) / total
    return CdfCurve(t, lam, np.maximum(lam_minus, 0.0))


def exponential_fit(t, lam):
    """Fit ln lambda = b + s t.  Returns (slope s, r2)."""
    t = np.asarray(t, float)
    y = np.log(np.asarray(lam, float))
    s, b = np.polyfit(t, y, 1)
    res = y - (s * t + b)
    return float(s), float(1 - np.sum(res**2) / np.sum((y - y.mean()) ** 2))


def inverse_fit(t, lam):
    """Fit lambda = c / t by least squares in log space; returns c and the
    largest factor by which t*lambda departs from c."""
    tl = np.asarray(t, float) * np.asarray(lam, float)
    if np.any(tl <= 0):
        return float("nan"), float("inf")
    c = float(np.exp(np.mean(np.log(tl))))
    return c, float(max(tl.max() / c, c / tl.min()))


# ------------------------------------------------------- short-interval counts

@dataclass(frozen=True)
class GallagherHistogram:
    X: int
    lam: float
    L: int
    counts: np.ndarray   # count per sample
    N: np.ndarray        # support 0..max
    freq: np.ndarray
    poisson: np.ndarray
    tv: float

    @property
    def mean(self) -> float:
        return float(self.counts.mean())

    @property
    def var(self) -> float:
        return float(self.counts.var())


def gallagher_histogram(X: int, lam: float = 2.0, samples: int = 100_000,
                        seed: int = 0, segment: int = 1 << 24) -> GallagherHistogram:
    """Prime counts in ``samples`` random intervals [M, M+L] with M uniform on [2, X].

    L = round(lam * ln X).  Intervals are processed in sieve segments so
    memory stays bounded.  The total-variation distance to Poisson(lam) is
    half the l1 distance including the Poisson tail beyond the observed
    maximum.
    """
    L = int(round(lam * math.log(X)))
    if L < 1:
        raise ValueError("lam * ln X must be at least 1")
    rng = np.random.default_rng(seed)
    Ms = np.sort(rng.integers(2, X + 1, size=samples))
    counts = np.empty(samples, dtype=np.int64)
    start = 0
    while start < samples:
        lo = int(Ms[start])
        stop = int(np.searchsorted(Ms, lo + segment, side="left"))
        hi = int(Ms[stop - 1]) + L  # last integer needed
        occ = interval_occupancy(lo - 1, hi - lo + 1)  # integers lo..hi
        cs = np.concatenate([[0], np.cumsum(occ, dtype=np.int64)])
        m = Ms[start:stop] - lo
        counts[start:stop] = cs[m + L + 1] - cs[m]
        start = stop
    top = int(counts.max())
    N = np.arange(top + 1)
    freq = np.bincount(counts, minlength=top + 1) / samples
    pmf = sstats.poisson.pmf(N, lam)
    tv = 0.5 * (np.abs(freq - pmf).sum() + (1.0 - pmf.sum()))
    return GallagherHistogram(X, lam, L, counts, N, freq, pmf, float(tv))


def refine_grid(M_list, per_bin: int = 8, width: float = 0.2) -> np.ndarray:
    """Expand each M into ``per_bin`` values spread log-uniformly over [M, (1+width) M)."""
    M = np.asarray(M_list, dtype=float)
    frac = (1 + width) ** (np.arange(per_bin) / per_bin)
    return np.rint(M[:, None] * frac[None, :]).astype(np.int64).ravel()


def bin_average(tmap: TauMap, per_bin: int) -> TauMap:
    """Average ln tau over consecutive groups of ``per_bin`` rows (see refine_grid).

    The binned map keeps the first M of each group.  Cells where tau is
    undefined are ignored in the average.
    """
    nb = tmap.M.size // per_bin
    lt = tmap.ln_tau[: nb * per_bin].reshape(nb, per_bin, -1)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)  # all-NaN groups stay NaN
        avg = np.nanmean(lt, axis=1)
    return TauMap(tmap.M[::per_bin][:nb], tmap.L, avg)
