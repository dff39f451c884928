"""Intersection pairs, Pi-compatibility checks, homotopy checks and Euler pairs."""

from .euler import EulerReport, FieldZero, euler_pair_pi, euler_report, field_consistency
from .homotopy import HomotopyCheck, homotopy_invariance_check
from .pairs import (
    IntersectionPoint,
    IntersectionReport,
    SignPair,
    comparison_matrices,
    find_body_intersections,
    intersection_pair,
    intersection_report,
    merge_across_charts,
    point_data_at,
    sign_pair_at,
)
from .pi import PI_TOL, PiCheck, check_pi_model, check_pi_morphism, pi_residual
from .roots import dedup, newton
from .submanifold import Slice, SubmanifoldModel, coordinate_slice

__all__ = [
    "EulerReport", "FieldZero", "euler_pair_pi", "euler_report", "field_consistency",
    "HomotopyCheck", "homotopy_invariance_check",
    "IntersectionPoint", "IntersectionReport", "SignPair", "comparison_matrices", "find_body_intersections",
    "intersection_pair", "intersection_report", "merge_across_charts", "point_data_at", "sign_pair_at",
    "PI_TOL", "PiCheck", "check_pi_model", "check_pi_morphism", "pi_residual",
    "dedup", "newton", "Slice", "SubmanifoldModel", "coordinate_slice",
]
