"""
Predicting primes from the peak model
=====================================

Keeping only the peaks with denominator up to n_max, the density field is
synthesised, inverse transformed, and the brightest sites are called prime.
With a few thousand peaks nearly every call is right.
"""

# %%
from primeorder.reconstruct import accuracy_curve

for rep in accuracy_curve(10**6, 510510, [1, 50, 200, 500]):
    print(f"n_max = {rep.n_max:4d}: precision {rep.precision:.4f}, "
          f"t1 = {rep.t1:7.2f}, t2 = {rep.t2:6.2f}")

# %%
# Wrong calls at moderate n_max are mostly products of two primes that
# both exceed n_max / 2; the peaks simply cannot see such factors.
rep = accuracy_curve(10**6, 510510, [500])[0]
print(rep.factorizations()[:5])
