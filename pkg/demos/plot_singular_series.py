"""
Pair correlations and the singular series
=========================================

The pair correlation of the primes at even separation r follows from the
peak table, and equals the Hardy-Littlewood singular series.  Three
independent routes give the same numbers.
"""

# %%
from primeorder.models import hl_g2, singular_series_pair, singular_series_ramanujan

print(" r   Euler product   Ramanujan series   peak sum")
for r in (2, 4, 6, 10, 30, 210):
    print(f"{r:3d}   {singular_series_pair(r).value:.6f}        "
          f"{singular_series_ramanujan(r).value:.6f}           {hl_g2(r, 10**4):.6f}")

# %%
# Counting actual pairs between 10^6 and 2*10^6 against the classical estimate.
import numpy as np

from primeorder.models import hardy_littlewood_pair_count
from primeorder.numtheory import primes_upto

p = primes_upto(2 * 10**6)
p = p[p >= 10**6]
pset = set(p.tolist())
for r in (2, 6, 30):
    n = sum(1 for q in p if q + r in pset)
    print(f"r = {r:2d}: {n} pairs, estimate {hardy_littlewood_pair_count(r, 10**6, 10**6):.0f}")
