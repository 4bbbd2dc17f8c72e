"""Empirical spectral quantities of a point configuration.

The complex density variable is eta(k) = sum_j exp(-i k x_j), sampled on the
uniform grid k_j = 2 pi j / L by one FFT of the 0/1 occupancy sequence.  The
scattering intensity is S(k) = |eta(k)|^2 / N.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.fft as sfft

from .configs import PointConfiguration


@dataclass(frozen=True)
class Spectrum:
    """Sampled scattering intensity.

    ``kgrid[j] = 2*pi*j/length`` for the uniform grid.  ``S[0] = N`` is the
    forward-scattering value; ``forward_included`` says whether consumers
    should count it.
    """

    kgrid: np.ndarray = field(repr=False)
    eta: np.ndarray = field(repr=False)
    S: np.ndarray = field(repr=False)
    N: int
    length: int
    forward_included: bool = True
    spacing: int = 1

    @property
    def dk(self) -> float:
        return 2 * np.pi / self.length

    def half(self):
        """Grid points 0 <= k <= pi and their S values."""
        m = self.length // 2 + 1
        return self.kgrid[:m], self.S[:m]


def _require_points(config: PointConfiguration) -> None:
    if config.N == 0:
        raise ValueError("configuration has no occupied sites")


def density_variable(config: PointConfiguration, workers: int | None = None) -> Spectrum:
    """eta(k) on the uniform grid of the configuration's length.

    The transform has exactly ``length`` points (mixed radix, no padding), so
    the discrete Parseval identity holds to rounding error.
    """
    _require_points(config)
    eta = sfft.fft(config.occupancy(), workers=workers)
    S = (eta.real**2 + eta.imag**2) / config.N
    k = 2 * np.pi * np.arange(config.length) / config.length
    return Spectrum(k, eta, S, config.N, config.length, True, config.spacing)


def structure_factor(config: PointConfiguration, workers: int | None = None) -> Spectrum:
    """S(k) = |eta(k)|^2 / N on the uniform grid (forward value kept in S[0])."""
    return density_variable(config, workers)


def structure_factor_at(config: PointConfiguration, k, chunk: int = 1 << 16) -> np.ndarray | float:
    """Direct O(N) evaluation of S at arbitrary wavenumbers.

    ``k`` is in the configuration's lattice units.  Accepts a scalar or an
    array and returns the same shape.
    """
    _require_points(config)
    k_arr = np.atleast_1d(np.asarray(k, dtype=float))
    x = config.occupied.astype(float)
    out = np.empty(k_arr.shape)
    for idx, kk in enumerate(k_arr.ravel()):
        re = im = 0.0
        for a in range(0, x.size, chunk):
            ph = kk * x[a : a + chunk]
            re += np.cos(ph).sum()
            im -= np.sin(ph).sum()
        out.flat[idx] = (re * re + im * im) / config.N
    return out if np.ndim(k) else float(out[0])


def cumulative_intensity(spectrum: Spectrum, K, include_forward: bool = False):
    """Z(K) = 2 * integral of S over (0, K], as a grid sum.

    Each grid point 0 < k_j <= K contributes S(k_j) * dk.  A point sitting
    exactly at k = pi gets half weight, the trapezoid endpoint, so that the
    sum over (0, pi] is half the sum over the full circle.  With
    ``include_forward`` the k = 0 point also enters with half weight.  Then
    Z(pi) = 2 pi exactly by Parseval; without it Z(pi) = 2 pi (1 - f).

    Accepts scalar or array K in (0, pi].
    """
    K_arr = np.atleast_1d(np.asarray(K, dtype=float))
    if np.any(K_arr <= 0) or np.any(K_arr > np.pi * (1 + 1e-12)):
        raise ValueError("K must lie in (0, pi]")
    Lg = spectrum.length
    m = Lg // 2 + 1
    w = np.ones(m)
    w[0] = 0.5 if include_forward else 0.0
    if Lg % 2 == 0:
        w[-1] = 0.5
    csum = np.cumsum(w * spectrum.S[:m])
    # number of grid points with k_j <= K
    j = np.floor(K_arr * Lg / (2 * np.pi) * (1 + 1e-12)).astype(np.int64)
    j = np.minimum(j, m - 1)
    Z = 2 * spectrum.dk * csum[j]
    return Z if np.ndim(K) else float(Z[0])


@dataclass(frozen=True)
class PairCorrelation:
    rgrid: np.ndarray
    counts: np.ndarray
    g2: np.ndarray
    f: float
    periodic: bool = False


def _pair_counts(x: np.ndarray, r_max: int, periodic: bool) -> np.ndarray:
    n = x.size
    counts = np.empty(r_max, dtype=np.int64)
    for r in range(1, r_max + 1):
        if periodic:
            counts[r - 1] = np.count_nonzero(x & np.roll(x, -r))
        else:
            counts[r - 1] = np.count_nonzero(x[: n - r] & x[r:])
    return counts


def pair_correlation(config: PointConfiguration, r_max: int, periodic: bool = False,
                     sublattice: bool | None = None) -> PairCorrelation:
    """Pair correlation g2 from exact pair counts.

    g2(r) = count(r) * N_s / N^2, where count(r) is the number of occupied
    pairs at separation r and N_s the number of lattice sites.  For the
    primes (``sublattice`` defaults to True for them) the counts are taken on
    the odd sublattice, so N_s = L/2, f = 2N/L and the separations reported
    in ``rgrid`` are the even integers 2, 4, ..., r_max.  An uncorrelated
    gas has g2 close to 1.

    With ``periodic=True`` separations wrap around the segment; this is the
    form for which S(k) = 1 - f + f * sum_r h(r) exp(-ikr) holds exactly on
    the grid.
    """
    if sublattice is None:
        sublattice = config.kind == "primes"
    cfg = config.odd_sublattice() if sublattice else config
    _require_points(cfg)
    step = 2 if sublattice else 1
    r_sites = r_max // step
    if r_sites < 1 or r_sites >= cfg.length:
        raise ValueError("need 1 <= r_max < length")
    x = cfg.occupancy(bool)
    counts = _pair_counts(x, r_sites, periodic)
    g2 = counts * cfg.length / cfg.N**2
    rgrid = step * np.arange(1, r_sites + 1)
    return PairCorrelation(rgrid, counts, g2, cfg.f, periodic)


def parseval_ratio(spectrum: Spectrum) -> float:
    """(1/(L N)) sum_j |eta_j|^2; equal to one up to rounding."""
    return float(np.sum(spectrum.S) / spectrum.length)


def diffuse_level(spectrum: Spectrum, peak_k, halfwidth: int = 2) -> float:
    """Mean of S over (0, pi] with grid points near the given peaks removed."""
    k, S = spectrum.half()
    keep = np.ones(k.size, bool)
    keep[0] = False
    j = np.rint(np.asarray(peak_k) / spectrum.dk).astype(np.int64)
    for d in range(-halfwidth, halfwidth + 1):
        jj = j + d
        keep[jj[(jj >= 0) & (jj < k.size)]] = False
    return float(S[keep].mean())


def write_spectrum_csv(spectrum: Spectrum, path, header: str = "", half: bool = True) -> None:
    """CSV with columns k, re_eta, im_eta, S at 17 significant digits."""
    m = spectrum.length // 2 + 1 if half else spectrum.length
    data = np.column_stack([spectrum.kgrid[:m], spectrum.eta.real[:m],
                            spectrum.eta.imag[:m], spectrum.S[:m]])
    with open(path, "w") as fh:
        if header:
            fh.write(header)
        fh.write("k,re_eta,im_eta,S\n")
        np.savetxt(fh, data, delimiter=",", fmt="%.17g")


def write_spectrum_npz(spectrum: Spectrum, path) -> None:
    """Binary column format for large grids."""
    np.savez(path, k=spectrum.kgrid, eta=spectrum.eta, S=spectrum.S,
             N=spectrum.N, length=spectrum.length)
