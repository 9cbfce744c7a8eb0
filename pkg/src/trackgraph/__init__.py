"""Exact train-track and curve-graph toolkit for low-complexity punctured surfaces."""

__version__ = "0.1.0"
