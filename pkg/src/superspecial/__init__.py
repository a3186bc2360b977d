"""Superspecial (2,2)-isogeny graphs over F_{p^2} and product-hunting path finding."""

__version__ = "0.1.0"
