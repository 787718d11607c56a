"""Semismooth Newton solver for sparsity-constrained quadratically constrained quadratic programs."""

__version__ = "0.1.0"
