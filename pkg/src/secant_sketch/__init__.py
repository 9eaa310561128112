"""Structured random embeddings with empirical checks and dimension calculators."""

from .errors import SketchError
from .operators import (
    BlockParams,
    Dist,
    SorsParams,
    make_block,
    make_sob,
    make_sors,
    make_subgaussian,
    materialize,
)
from .transforms import TransformKind

__version__ = "1.0.0"

__all__ = [
    "BlockParams",
    "Dist",
    "SketchError",
    "SorsParams",
    "TransformKind",
    "make_block",
    "make_sob",
    "make_sors",
    "make_subgaussian",
    "materialize",
]
