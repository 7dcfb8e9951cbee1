"""Exact q-series verification of staircase-type partition identities."""

from .series import BivariateSeries, LaurentSeries

__version__ = "0.1.0"

__all__ = ["LaurentSeries", "BivariateSeries", "__version__"]
