"""Finite lattices, ordinal bounds and trace dynamics for fickleness levels of r.e. degrees."""

__version__ = "0.1.0"
