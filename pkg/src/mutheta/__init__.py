"""Exact weight calculus for mod p theta operators on unitary and symplectic data."""

from __future__ import annotations

from .datum import ShimuraDatum, load_datum, load_fixture, validate_datum
from .weights import Weight, make_weight, parse_weight

__all__ = [
    "ShimuraDatum",
    "Weight",
    "load_datum",
    "load_fixture",
    "make_weight",
    "parse_weight",
    "validate_datum",
]

__version__ = "0.1.0"
