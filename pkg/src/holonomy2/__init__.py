"""Holonomy 2-representations of Lie algebroids on two-term complexes."""

__version__ = "0.1.0"
