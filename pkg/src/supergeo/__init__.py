"""Supermanifold atlases in code.

Grassmann numbers, super expressions with parity-aware calculus, chart atlases
with transition checks, the four-sheeted orienting cover, oriented
intersection pairs and Euler pairs of pi-symmetric models, and generated
super Grassmannian atlases.
"""

from .errors import (
    DegeneracyError,
    DimensionError,
    DomainError,
    ModelError,
    NonTransversalError,
    NotInvertibleError,
    OrientationError,
    ParityError,
    ParseError,
    ResolutionError,
    SuperGeoError,
)
from .grassmann import GrassmannElement

__version__ = "0.1.0"

__all__ = [
    "GrassmannElement", "SuperGeoError", "DimensionError", "NotInvertibleError", "ParseError",
    "DomainError", "ParityError", "DegeneracyError", "NonTransversalError", "ResolutionError",
    "ModelError", "OrientationError",
]
