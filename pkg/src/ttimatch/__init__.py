"""Matching decoders for 2D translationally-invariant CSS codes on a torus."""

from .gf2 import BitMatrix, BitVector
from .poly import LaurentPoly, Monomial
from .code import CssCode, build_bb_code, logical_basis, logical_failure, syndrome
from .catalog import get_code, get_entry, code_names

__version__ = "0.1.0"

__all__ = [
    "BitMatrix",
    "BitVector",
    "LaurentPoly",
    "Monomial",
    "CssCode",
    "build_bb_code",
    "syndrome",
    "logical_basis",
    "logical_failure",
    "get_code",
    "get_entry",
    "code_names",
    "__version__",
]
