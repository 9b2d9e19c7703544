"""Fractal supports of Z2-valued discrete harmonic functions on Z^d."""

__version__ = "0.1.0"
