"""Exact homological algebra for small dg categories and numerical
Hodge correlators on the Riemann sphere."""

__version__ = "0.1.0"
