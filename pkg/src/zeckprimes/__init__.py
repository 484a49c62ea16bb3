"""Zeckendorf numeration, exact golden-ratio arithmetic and prime digit statistics."""

__version__ = "0.1.0"
