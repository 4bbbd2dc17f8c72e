"""
Number variance and the tau order metric
========================================

Windows of 2R sites on a periodic lattice hold a bounded number of points,
a random lattice gas gives variance growing like R, and the
period-doubling chain sits in between with logarithmic growth.  The tau
metric summarises how far a spectrum is from that of an ideal gas.
"""

# %%
import numpy as np

from primeorder.configs import integer_lattice_config, lattice_gas_config, period_doubling_config
from primeorder.models import pd_number_variance_closed
from primeorder.stats import number_variance_direct, prime_tau, tau_discrete

R = np.array([10.0, 100.0, 1000.0])
cases = {
    "lattice f=0.1": integer_lattice_config(10**6, 0.1),
    "gas f=0.1": lattice_gas_config(10**6, 0.1, seed=7),
    "period doubling": period_doubling_config(20),
}
for name, cfg in cases.items():
    v = number_variance_direct(cfg, R).sigma2
    print(f"{name:16s}", "  ".join(f"sigma2({r:g}) = {x:8.3f}" for r, x in zip(R, v)))
print("closed form for the chain:", np.round(pd_number_variance_closed(R), 3))

# %%
# tau grows linearly with the interval for the primes, slope about 0.17.
for L in (10**5, 10**6):
    r = prime_tau(10**8, L)
    print(f"L = {L:>8d}: tau/rho^2/L = {r.tau / r.rho**2 / r.L:.4f}")
print("gas tau:", round(tau_discrete(lattice_gas_config(10**6, 0.1, 1)).tau, 4), "vs (1-f)^2 = 0.81")
