"""Verification toolkit for iterated Fano double covers."""

__version__ = "0.1.0"
