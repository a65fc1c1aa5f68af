"""Exact tools for longest noncrossing paths, cycles and matchings in the plane."""

__version__ = "0.1.0"
