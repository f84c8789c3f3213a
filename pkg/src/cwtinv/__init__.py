"""Continuous wavelet transform with admissibility-free reconstruction."""
__version__ = "0.1.0"
