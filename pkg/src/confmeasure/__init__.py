"""Conformally invariant random fields on the disk: series, measures and checks."""

__version__ = "0.1.0"
