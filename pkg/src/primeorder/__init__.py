"""Spectral analysis of one-dimensional lattice point processes.

The package studies the primes as a configuration of occupied sites on the
integer lattice and compares them with three reference families: the
periodic integer lattice, the uncorrelated lattice gas and the
period-doubling substitution chain.
"""

__version__ = "0.1.0"


