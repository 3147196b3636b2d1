"""Representation shifts of knot groups into finite groups."""

__version__ = "0.1.0"
