"""Bounded-degree spanning-tree embedding in pseudorandom graphs via sorting-network routing."""

__version__ = "0.1.0"
