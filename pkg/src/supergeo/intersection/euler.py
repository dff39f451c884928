"""Euler pair of a Pi-symmetric model from the zeros of a vector field on the body."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ..atlas.model import SuperManifoldModel
from ..atlas.morphism import grid
from ..atlas.supermap import SuperMap
from ..errors import DegeneracyError, ModelError
from ..orientation import SIGN_TOL
from ..superexpr import parse
from .pairs import merge_across_charts
from .roots import dedup, newton

log = logging.getLogger("supergeo.euler")

FIELD_TOL = 1e-8


@dataclass(frozen=True)
class FieldZero:
    chart: str
    point: tuple[float, ...]
    det: float
    index: int

    def to_dict(self) -> dict:
        return {"chart": self.chart, "point": list(self.point), "det": self.det, "index": self.index}


@dataclass
class EulerReport:
    model: str
    zeros: list[FieldZero] = field(default_factory=list)
    field_residual: float = 0.0

    @property
    def euler_characteristic(self) -> int:
        return sum(z.index for z in self.zeros)

    @property
    def pair(self) -> tuple[int, int]:
        chi = self.euler_characteristic
        return (chi, chi)

    def to_dict(self) -> dict:
        return {"model": self.model, "zeros": [z.to_dict() for z in self.zeros],
                "euler_pair": list(self.pair), "field_residual": self.field_residual}


def _field_maps(model: SuperManifoldModel, vf: dict) -> dict[str, SuperMap]:
    maps = {}
    for c in model.charts:
        if c.id not in vf:
            raise ModelError(f"vector field missing for chart {c.id!r}")
        comps = [parse(e, c.coords) if isinstance(e, str) else e for e in vf[c.id]]
        if len(comps) != model.m:
            raise ModelError(f"vector field on {c.id!r} needs {model.m} components")
        maps[c.id] = SuperMap(c.coords, comps, model.m)
    return maps


def field_consistency(model: SuperManifoldModel, maps: dict[str, SuperMap]) -> float:
    """Largest relative mismatch of ``v_b(g(x))`` against ``dg(x) v_a(x)`` over transition samples."""
    worst = 0.0
    for t in model.transitions:
        for o in t.overlaps:
            for s in o.samples:
                col = s.reshape(-1, 1)
                y = t.map.body(col)
                lhs = maps[t.target].body(y)[:, 0]
                rhs = t.map.even_block(col)[..., 0] @ maps[t.source].body(col)[:, 0]
                worst = max(worst, float(np.max(np.abs(lhs - rhs) / (1.0 + np.abs(rhs)), initial=0.0)))
    return worst


def euler_report(model: SuperManifoldModel, vf: dict, grid_density: int = 64, newton_tol: float = 1e-10,
                  sign_tol: float = SIGN_TOL, budget: int = 20000) -> EulerReport:
    """Sum of the indices of the zeros of ``vf``, reported once per parity.

    ``vf`` maps chart ids to the field's components (expressions or text) in
    that chart's even coordinates.  The model must carry a pi-structure.
    """
    if model.pi_structure is None:
        raise ModelError("Euler pairs are only computed for models with a pi-structure",
                         model=model.name)
    if not model.compact_body:
        raise ModelError("body must be compact")
    maps = _field_maps(model, vf)
    res = field_consistency(model, maps)
    if res > FIELD_TOL:
        raise ModelError("vector field does not transform consistently between charts",
                         residual=res)
    radius = 10.0 * newton_tol
    found, flags = [], []
    for c in model.charts:
        if c.box is None:
            raise ModelError(f"chart {c.id!r} needs a box to seed the zero search")
        v = maps[c.id]
        seeds = grid(c.box, grid_density, budget)
        seeds = seeds[:, c.domain.evaluate(seeds)]
        roots = newton(v.body, v.even_block, seeds, newton_tol)
        if roots.size:
            roots = roots[:, c.domain.evaluate(roots)]
        if roots.shape[1]:
            dets = np.linalg.det(np.moveaxis(v.even_block(roots), -1, 0))
            uniq, loose = dedup(roots, radius, loose=np.abs(dets) < sign_tol)
            found += [(c.id, r) for r in uniq.T]
            flags += list(loose)
    report = EulerReport(model.name, field_residual=res)
    for cid, x in merge_across_charts(model, found, radius, loose=flags):
        d = float(np.linalg.det(maps[cid].even_block(x.reshape(-1, 1))[..., 0]))
        if abs(d) < sign_tol:
            raise DegeneracyError("degenerate zero of the vector field", chart=cid,
                                  point=x.tolist(), det=d)
        report.zeros.append(FieldZero(cid, tuple(map(float, x)), d, 1 if d > 0 else -1))
    log.info("%s: %d zeros, euler characteristic %d", model.name, len(report.zeros),
             report.euler_characteristic)
    return report


def euler_pair_pi(model: SuperManifoldModel, vf: dict, grid_density: int = 64, newton_tol: float = 1e-10,
                  sign_tol: float = SIGN_TOL) -> tuple[int, int]:
    return euler_report(model, vf, grid_density, newton_tol, sign_tol).pair
