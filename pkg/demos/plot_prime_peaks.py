"""
Bragg peaks in the primes
=========================

The primes in a long interval, viewed as occupied sites on the integer
line, scatter like a quasicrystal: the structure factor has sharp peaks at
rational multiples of pi with odd square-free denominators, and nothing at
denominators such as 9.
"""

# %%
# Sieve one million integers above 10^6 and take the transform.
import math

import numpy as np

from primeorder.configs import primes_config
from primeorder.models import predicted_peak_height, prime_peak_table
from primeorder.spectral import parseval_ratio, structure_factor, structure_factor_at

c = primes_config(10**6, 10**6)
s = structure_factor(c)
print(f"N = {c.N} primes in {c.length} sites, Parseval ratio {parseval_ratio(s):.15f}")

# %%
# Compare measured peak heights with the model N / phi(n)^2.
for m, n in [(1, 1), (1, 3), (1, 5), (1, 7), (1, 15), (1, 9)]:
    meas = structure_factor_at(c, m * math.pi / n)
    try:
        pred = predicted_peak_height(c.N, m, n)
    except ValueError:
        pred = float("nan")
    print(f"k = {m}pi/{n:<3d}  S/N measured {meas / c.N:9.6f}   model {pred / c.N:9.6f}")

# %%
# The peak table up to n = 105 already carries most of the scattering.
t = prime_peak_table(105)
print(f"{len(t)} peaks in (0, pi], total weight {np.sum(t.weight * t.multiplicity):.4f}")
