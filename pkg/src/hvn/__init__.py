"""Heavenly elliptic curves over quadratic fields: sieves, traces and CM search."""

__version__ = "0.1.0"
