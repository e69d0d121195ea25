"""Eichler words, modified Jordan blocks, logarithmic q-expansions and growth checks."""

__version__ = "0.1.0"
