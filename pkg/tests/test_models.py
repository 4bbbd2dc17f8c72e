import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from primeorder.models import (TWIN_PRIME_CONSTANT, hl_g2, pd_cumulative_bounds,
                               pd_cumulative_intensity, pd_number_variance,
                               pd_number_variance_closed, pd_structure_factor, pd_variance_bounds,
                               predicted_peak_height, prime_cumulative_model, prime_peak_table,
                               singular_series_pair, singular_series_ramanujan, variance_kernel,
                               zeta_structure_factor, zeta_tau)
from primeorder.numtheory import euler_phi


def test_peak_table_small():
    t = prime_peak_table(1)
    assert len(t) == 1 and t.k[0] == pytest.approx(np.pi) and t.weight[0] == 1
    t = prime_peak_table(15)
    three = t.n == 3
    assert np.allclose(t.k[three], [np.pi / 3, 2 * np.pi / 3])
    assert np.allclose(t.weight[three], 0.25)
    assert 9 not in t.n
    assert np.all(t.n % 2 == 1)
    assert all(math.gcd(int(m), int(n)) == 1 for m, n in zip(t.m, t.n))
    assert np.all((t.k > 0) & (t.k <= np.pi))


def test_peak_table_counts():
    t = prime_peak_table(105)
    for n in (3, 5, 7, 15, 21, 35, 105):
        assert np.sum(t.n == n) == euler_phi(n)


@given(st.integers(1, 300), st.integers(1, 300))
def test_weight_multiplicative(a, b):
    a, b = 2 * a - 1, 2 * b - 1
    if math.gcd(a, b) == 1:
        w = lambda n: 1 / euler_phi(n) ** 2
        assert w(a * b) == pytest.approx(w(a) * w(b))


def test_predicted_heights():
    assert predicted_peak_height(1000, 1, 1) == 1000
    assert predicted_peak_height(1000, 1, 3) == 250
    assert predicted_peak_height(1000, 1, 9) == 0
    with pytest.raises(ValueError):
        predicted_peak_height(1000, 3, 9)


def test_twin_constant():
    v = singular_series_pair(2)
    assert v.value == pytest.approx(2 * TWIN_PRIME_CONSTANT, abs=1e-6)
    assert v.value == pytest.approx(1.320324, abs=1e-6)


def test_singular_series_examples():
    s2 = singular_series_pair(2).value
    assert singular_series_pair(4).value == s2
    assert singular_series_pair(30).value == pytest.approx(s2 * 2 * 4 / 3)
    odd = singular_series_pair(3)
    assert odd.value == 0 and odd.odd_r


def test_hl_g2_examples():
    assert hl_g2(2, 10**4) == pytest.approx(singular_series_pair(2).value, abs=1e-3)
    assert hl_g2(6, 10**4) / hl_g2(2, 10**4) == pytest.approx(2.0, rel=1e-4)
    for r in (2, 4, 10):
        assert hl_g2(r, 1) == pytest.approx(1 + math.cos(r * math.pi))
    with pytest.warns(UserWarning):
        assert hl_g2(3, 100) == pytest.approx(0.0, abs=1e-12)


def test_hl_g2_direct_and_identity_paths_agree():
    # n_max small enough that every term is summed explicitly
    direct = hl_g2(12, 60)
    from primeorder.numtheory import ramanujan_sum
    identity = 2 + sum(2 * ramanujan_sum(n, 12) / euler_phi(n) ** 2
                       for n in range(3, 61, 2) if all(n % (p * p) for p in (3, 5, 7)))
    assert direct == pytest.approx(identity, rel=1e-12)


def test_ramanujan_series_examples():
    assert singular_series_ramanujan(2).value == pytest.approx(singular_series_pair(2).value, abs=1e-3)
    assert abs(singular_series_ramanujan(7).value) < 1e-2
    assert singular_series_ramanujan(2, 1).value == 1.0


@pytest.mark.parametrize("r", [2, 6, 14, 30, 64, 90, 98, 150, 200])
def test_three_forms_agree(r):
    e = singular_series_pair(r).value
    assert hl_g2(r, 10**4) == pytest.approx(e, abs=1e-3)
    assert singular_series_ramanujan(r).value == pytest.approx(e, abs=1e-3)


def test_pd_peaks():
    k, w = pd_structure_factor(6, np.pi)
    at_pi = np.isclose(k, np.pi)
    assert w[at_pi][0] == pytest.approx(np.pi / 3)
    assert not np.any(np.isclose(k, np.pi / 3))
    # weights drop by 4 per level
    w1 = w[np.isclose(k, np.pi / 2)][0]
    w2 = w[np.isclose(k, np.pi / 4)][0]
    assert w1 / w2 == pytest.approx(4)
    k2, w2 = pd_structure_factor(3, 2 * np.pi)
    assert w2[np.isclose(k2, 2 * np.pi)][0] == pytest.approx(4 * np.pi / 3)


def test_pd_z_matches_peak_sum():
    # level n contributes about 2^-n, so 24 levels pin the staircase to ~1e-7
    k, w = pd_structure_factor(24, np.pi)
    for K in (np.pi, 2.0, 0.7, 0.1):
        assert pd_cumulative_intensity(K) == pytest.approx(2 * w[k <= K + 1e-12].sum(), rel=1e-5)
    assert pd_cumulative_intensity(1e-3, n_terms=5) == 0.0


def test_pd_z_self_similar_and_enveloped():
    K = np.geomspace(1e-4, 3.0, 500)
    Z = pd_cumulative_intensity(K)
    ratio = Z / K**2
    assert ratio.min() >= 1 / (3 * np.pi) - 1e-12
    assert ratio.max() <= 1 / np.pi + 1e-12
    assert pd_cumulative_intensity(0.3) == pytest.approx(4 * pd_cumulative_intensity(0.15), rel=1e-12)
    lo, hi = pd_cumulative_bounds(K)
    assert np.allclose(hi / lo, 3)


def test_pd_variance_forms():
    R = np.array([0.5, 3.0, 17.0, 250.0])
    closed = pd_number_variance_closed(R)
    trunc = pd_number_variance(R, n_max=60, m_max=4000)
    assert np.allclose(trunc, closed, atol=2e-3)
    # the first sum vanishes at R = 1/2; only the n=1 triangle term survives
    assert pd_number_variance_closed(0.5) == pytest.approx(2 / 9, rel=1e-9)


def test_pd_variance_tail_is_small():
    a = pd_number_variance(100.0, n_max=60, m_max=20000)
    b = pd_number_variance(100.0, n_max=60, m_max=40000)
    assert abs(a - b) < 1e-4


def test_pd_variance_upper_envelope():
    R = np.arange(100, 10001, dtype=float)
    s = pd_number_variance_closed(R)
    lo, hi = pd_variance_bounds(R)
    assert np.all(s <= 1.2 * hi)
    # the bulk sits above the lower envelope; dyadic R are the exception below
    assert np.median(s / lo) > 1.0


def test_pd_variance_dyadic_plateau():
    # windows of dyadic length hold an almost fixed number of a-sites
    R = 2.0 ** np.arange(1, 30)
    assert np.allclose(pd_number_variance_closed(R), 2 / 9, rtol=1e-12)


def test_zeta():
    assert zeta_structure_factor(2 * np.pi) == 1
    assert zeta_structure_factor(4 * np.pi) == 1
    assert zeta_structure_factor(np.pi) == 0.5
    assert zeta_tau() == pytest.approx(2 / 3, abs=1e-6)


def test_prime_cumulative_model():
    M = 1e15
    nmax = int(10 * math.log(M))
    K0 = np.pi / nmax
    mod = prime_cumulative_model([K0 * 0.5, K0], M, nmax)
    assert mod.below_cutoff.tolist() == [True, False]
    assert mod.smooth[1] == pytest.approx(0.0, abs=1e-15)
    # peak sum runs about twice the smooth form
    K = np.geomspace(2 * np.pi / nmax, 0.1, 8)
    mod = prime_cumulative_model(K, M, nmax)
    assert np.all(np.abs(mod.peak_sum / mod.smooth / 2 - 1) < 0.1)


def test_variance_kernel_limit():
    assert variance_kernel(np.array([0.0]), 7.0)[0] == 14.0
    k = np.array([1e-6])
    assert variance_kernel(k, 7.0)[0] == pytest.approx(14.0, rel=1e-6)
