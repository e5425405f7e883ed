"""Ladder filtrations of Jacobi-diagram spaces with exact linear algebra."""

__version__ = "0.1.0"
