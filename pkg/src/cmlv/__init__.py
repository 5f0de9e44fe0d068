"""Exact and p-adic computation of Hecke L-values for the curves y^2 = x^3 - Dx."""

__version__ = "0.1.0"
