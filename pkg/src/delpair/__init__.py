"""Exact Deligne pairing sections, norm functors and Arakelov metrics."""

__version__ = "0.1.0"
