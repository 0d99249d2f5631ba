"""Exact computations in stated skein algebras of punctured bordered surfaces."""

from .qcoeff import Laurent, parse as parse_scalar

__all__ = ["Laurent", "parse_scalar"]
__version__ = "0.1.0"
