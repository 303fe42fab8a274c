"""Exact rational desk checks for dg quotients, Hopf tetramodules and the GS complex."""

__version__ = "0.1.0"
