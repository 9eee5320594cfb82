"""Efficient subdivision of chains over word-hyperbolic groups, with exact certificates."""

__version__ = "0.1.0"
