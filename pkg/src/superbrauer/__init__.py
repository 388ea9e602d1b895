"""Exact computations in the walled Brauer superalgebra and the Sergeev diagram algebra."""

__version__ = "0.1.0"
