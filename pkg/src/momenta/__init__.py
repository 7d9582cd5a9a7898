"""Momentum maps on universal covers, Hamiltonian holonomy, cylinder-valued
momentum maps, and reduced-space cover data for magnetic cotangent bundles of
tori and the Heisenberg group."""

__version__ = "0.1.0"
