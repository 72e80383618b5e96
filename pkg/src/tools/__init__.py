"""Arithmetic, cycle and matrix building blocks for QCIRS."""

from src.tools.expmat import ExponentMatrix, Girth, TannerGraph
from src.tools.irs import RowPermutation, build_matrix
from src.tools.zring import find_generators

__all__ = [
    "ExponentMatrix",
    "Girth",
    "TannerGraph",
    "RowPermutation",
    "build_matrix",
    "find_generators",
]
