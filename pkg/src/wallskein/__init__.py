"""Exact quantum cluster algebras of walled marked surfaces."""

__version__ = "0.1.0"
