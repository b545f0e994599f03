"""Numerical laboratory for the Riemann-potential quantum oscillator."""
__version__ = "0.1.0"
