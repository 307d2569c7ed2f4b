"""Exact computations for SL3 skein algebras of triangulated punctured surfaces."""

__version__ = "0.1.0"
