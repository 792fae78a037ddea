"""Exact computer algebra for species with potential.

The package builds species over the rationals and their finite extensions,
manipulates potentials inside completed tensor algebras, computes Jacobian
quotients, mutates at vertices and along orbits, forms tensor products of
species, and analyses self-injectivity through Nakayama data.
"""

__version__ = "0.1.0"
