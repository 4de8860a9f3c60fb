"""Exact computations for finite Frobenius algebras: bimodule syzygies,
stable isomorphism, Hochschild cochains and the Gerstenhaber structure."""

__version__ = "0.1.0"
