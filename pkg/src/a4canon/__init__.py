"""Exact verification of canonical-basis elements of U+ in type A4."""

__version__ = "0.1.0"
