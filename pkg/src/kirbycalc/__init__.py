"""Dichromatic invariants of closed oriented 4-manifolds from Kirby diagrams."""

__version__ = "0.1.0"
