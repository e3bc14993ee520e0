"""Exact computations with right invertible operators on truncated spaces."""

__version__ = "0.1.0"
