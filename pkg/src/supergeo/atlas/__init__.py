"""Supermanifolds as atlases of superdomains glued by transition morphisms."""

from .builders import line_model, product_model, twisted_circle
from .model import Chart, Overlap, PiStructure, SuperManifoldModel, TransitionMap
from .morphism import (
    EvaluatedPoint,
    MorphismModel,
    MorphismPiece,
    angle_lift_morphism,
    compose_morphisms,
    evaluate_morphism,
    grid,
    identity_morphism,
    restrict_morphism,
    validate_morphism,
)
from .registry import builtin_names, get_model, registry
from .supermap import SuperMap
from .validate import ValidationReport, validate_model

__all__ = [
    "Chart", "Overlap", "PiStructure", "SuperManifoldModel", "TransitionMap", "SuperMap",
    "ValidationReport", "validate_model", "registry", "get_model", "builtin_names",
    "twisted_circle", "product_model", "line_model",
    "MorphismModel", "MorphismPiece", "EvaluatedPoint", "evaluate_morphism", "compose_morphisms",
    "identity_morphism", "validate_morphism", "angle_lift_morphism", "restrict_morphism", "grid",
]
