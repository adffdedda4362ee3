"""Fourier analysis of Boolean functions on the Hamming cube."""

from .cube import (
    BooleanFunction,
    RealFunction,
    evaluate,
    flip,
    is_monotone,
    point_index,
    point_vector,
    restrict,
    subset_mask,
)
from .fourier import Spectrum, inverse_transform, transform
from .report import Report

__all__ = [
    "BooleanFunction",
    "RealFunction",
    "Report",
    "Spectrum",
    "evaluate",
    "flip",
    "inverse_transform",
    "is_monotone",
    "point_index",
    "point_vector",
    "restrict",
    "subset_mask",
    "transform",
]

__version__ = "0.1.0"
