"""Numerical laboratory for small-data soliton selection in NLS."""

__version__ = "0.1.0"
