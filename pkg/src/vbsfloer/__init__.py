"""Combinatorial sutured Floer toolkit for veering branched surfaces."""

from __future__ import annotations

from .complex import (
    Sector,
    VeeringComplex,
    ValidationReport,
    branch_loops,
    cyclic_cover,
    parse_complex,
    serialize,
    validate,
)
from .datasets import bundled_datasets, load_dataset

__all__ = [
    "Sector",
    "VeeringComplex",
    "ValidationReport",
    "branch_loops",
    "bundled_datasets",
    "cyclic_cover",
    "load_dataset",
    "parse_complex",
    "serialize",
    "validate",
]
