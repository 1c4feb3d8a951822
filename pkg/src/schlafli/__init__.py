"""Numerical companion to the symplectic proof of the Schlafli identity."""
__version__ = "0.1.0"
