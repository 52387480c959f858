"""Numerical laboratory for the quantum interaction of wavevector-modulated
free electrons with a two-level emitter."""

__version__ = "0.1.0"
