"""Certified witnesses for small ramification of S_m and S_m^n extensions."""

__all__ = ["arith", "ffpoly", "forms", "groups", "intpoly", "specfield", "tower", "cli"]
