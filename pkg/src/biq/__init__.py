"""Automorphism calculi for bielliptic and quasi-bielliptic surfaces."""

__version__ = "0.1.0"
