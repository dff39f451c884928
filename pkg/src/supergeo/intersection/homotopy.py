"""Intersection pairs at both ends of a homotopy."""

from __future__ import annotations

from dataclasses import dataclass

from ..atlas.model import SuperManifoldModel
from ..atlas.morphism import MorphismModel, restrict_morphism
from ..orientation import SIGN_TOL
from .pairs import intersection_pair
from .submanifold import SubmanifoldModel


@dataclass(frozen=True)
class HomotopyCheck:
    start: tuple[int, int]
    end: tuple[int, int]

    @property
    def ok(self) -> bool:
        return self.start == self.end

    def to_dict(self) -> dict:
        return {"start": list(self.start), "end": list(self.end), "ok": self.ok}


def homotopy_invariance_check(H: MorphismModel, X: SuperManifoldModel, Z: SubmanifoldModel,
                              t0: float = 0.0, t1: float = 1.0, grid_density: int = 64,
                              newton_tol: float = 1e-10, sign_tol: float = SIGN_TOL) -> HomotopyCheck:
    """Compare ``I(H(., t0), Z)`` with ``I(H(., t1), Z)`` for ``H`` on ``X x R^{1|0}``."""
    a = intersection_pair(restrict_morphism(H, X, t0), Z, grid_density, newton_tol, sign_tol).total.as_tuple()
    b = intersection_pair(restrict_morphism(H, X, t1), Z, grid_density, newton_tol, sign_tol).total.as_tuple()
    return HomotopyCheck(a, b)
