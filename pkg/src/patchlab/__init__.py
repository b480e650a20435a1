"""Finite-model laboratory for nonabelian hypercohomology and patching."""

__version__ = "0.1.0"
