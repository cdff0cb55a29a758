"""Exact lattice toolkit for conic configurations on quartic surfaces."""

__version__ = "0.1.0"
