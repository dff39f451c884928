"""Morphisms between atlas models, given chart by chart."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError, ModelError
from ..superexpr import CoordinateSystem, parse
from ..superexpr.nodes import Const, add, const
from ..superexpr.predicate import Predicate, conjoin
from .model import SuperManifoldModel
from .supermap import SuperMap
from .validate import CheckRecord, ValidationReport, _residual, generic_point


@dataclass(frozen=True, eq=False)
class MorphismPiece:
    """``source_chart -> target_chart`` formula valid where ``predicate`` holds."""

    source_chart: str
    target_chart: str
    map: SuperMap
    predicate: Predicate
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        object.__setattr__(self, "samples", s.reshape(-1, self.map.m) if s.size else s.reshape(0, self.map.m))

    def contains(self, x) -> bool:
        return self.predicate(x)


@dataclass(frozen=True, eq=False)
class MorphismModel:
    source: SuperManifoldModel
    target: SuperManifoldModel
    pieces: tuple[MorphismPiece, ...]
    name: str = ""
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        for p in self.pieces:
            self.source.chart(p.source_chart)
            self.target.chart(p.target_chart)
            if (p.map.m, p.map.n) != (self.source.m, self.source.n):
                raise ModelError(f"piece {p.source_chart}->{p.target_chart} has wrong source dimension")
            if (p.map.m_out, p.map.n_out) != (self.target.m, self.target.n):
                raise ModelError(f"piece {p.source_chart}->{p.target_chart} has wrong target dimension")

    def pieces_from(self, chart: str) -> list[MorphismPiece]:
        return [p for p in self.pieces if p.source_chart == chart]

    def locate(self, chart: str, x) -> MorphismPiece:
        for p in self.pieces_from(chart):
            if p.contains(x):
                return p
        raise DomainError(f"point outside all validity predicates of chart {chart!r}",
                          chart=chart, point=[float(v) for v in np.ravel(x)])


@dataclass(frozen=True)
class EvaluatedPoint:
    chart: str
    point: np.ndarray
    even_block: np.ndarray
    odd_block: np.ndarray


def evaluate_morphism(f: MorphismModel, chart: str, point) -> EvaluatedPoint:
    """Image chart, image body point, and reduced Jacobian blocks at ``point``."""
    x = np.asarray(point, dtype=float).reshape(-1, 1)
    piece = f.locate(chart, x[:, 0])
    return EvaluatedPoint(piece.target_chart, piece.map.body(x)[:, 0],
                          piece.map.even_block(x)[..., 0], piece.map.odd_block(x)[..., 0])


def identity_morphism(model: SuperManifoldModel) -> MorphismModel:
    pieces = []
    for c in model.charts:
        pts = [s for t in model.transitions_from(c.id) for o in t.overlaps for s in o.samples]
        if not pts and c.box is not None:
            pts = [[0.5 * (lo + hi) for lo, hi in c.box]]
        pieces.append(MorphismPiece(c.id, c.id, SuperMap.identity(c.coords), c.domain, np.array(pts)))
    return MorphismModel(model, model, tuple(pieces), f"id_{model.name}")


def compose_morphisms(outer: MorphismModel, inner: MorphismModel) -> MorphismModel:
    """``outer o inner``: substitute inner's components into outer's, piece by piece."""
    if inner.target is not outer.source and inner.target.name != outer.source.name:
        raise ModelError("morphisms are not composable")
    pieces = []
    for p in inner.pieces:
        body = {i: p.map.forms[i].body for i in range(p.map.m_out)}
        for q in outer.pieces_from(p.target_chart):
            pred = conjoin(p.predicate, q.predicate.substitute(body))
            smap = q.map.after(p.map)
            pts = np.array([s for s in p.samples if pred(s)]).reshape(-1, inner.source.m)
            pieces.append(MorphismPiece(p.source_chart, q.target_chart, smap, pred, pts))
    return MorphismModel(inner.source, outer.target, tuple(pieces), f"{outer.name}o{inner.name}")


def _push(model: SuperManifoldModel, a: str, b: str, evens, odds, N):
    """Carry a Grassmann point from chart ``a`` to chart ``b`` of ``model``."""
    if a == b:
        return evens, odds
    q = np.array([e.body for e in evens])
    t = model.transition_at(a, b, q)
    if t is None:
        return None
    return t.map.apply(evens, odds, N)


def validate_morphism(f: MorphismModel, tol: float = 1e-9) -> ValidationReport:
    """Check ``phi_j o g_ij = h_ab o phi_i`` at every sample, for all charts involved.

    Also checks that two pieces valid at the same point agree after the
    target transition between their charts.
    """
    X, Y = f.source, f.target
    report = ValidationReport(f.name or "morphism", tol)
    for p in f.pieces:
        label = f"{p.source_chart}->{p.target_chart}"
        for msg in p.map.parity_issues:
            report.records.append(CheckRecord("parity", label, (), 1.0, False, msg))
        for s in p.samples:
            key = tuple(float(v) for v in s)
            if not p.contains(s):
                report.records.append(CheckRecord("domain", label, key, 1.0, False, "sample outside predicate"))
                continue
            img = p.map.body(s.reshape(-1, 1))[:, 0]
            if not Y.chart(p.target_chart).contains(img):
                report.records.append(CheckRecord("domain", label, key, 1.0, False, "image outside target chart"))
                continue
            evens, odds, N = generic_point(s, X.n)
            fe, fo = p.map.apply(evens, odds, N)
            routes = [(p.source_chart, evens, odds)]
            for t in X.transitions_from(p.source_chart):
                if t.covers(s):
                    ge, go = t.map.apply(evens, odds, N)
                    routes.append((t.target, ge, go))
            for chart, ge, go in routes:
                q = np.array([e.body for e in ge])
                for p2 in f.pieces_from(chart):
                    if p2 is p or not p2.contains(q):
                        continue
                    he, ho = p2.map.apply(ge, go, N)
                    pushed = _push(Y, p.target_chart, p2.target_chart, fe, fo, N)
                    if pushed is None:
                        report.records.append(CheckRecord(
                            "compatible", f"{label} vs {p2.source_chart}->{p2.target_chart}", key,
                            float("inf"), False, "no target transition covers the image"))
                        continue
                    r = _residual(list(pushed[0]) + list(pushed[1]), he + ho)
                    report.records.append(CheckRecord(
                        "compatible", f"{label} vs {p2.source_chart}->{p2.target_chart}", key, r, r < tol))
    return report


def grid(box, density: int, budget: int = 20000) -> np.ndarray:
    """Open-box grid of shape ``(d, G)``; the per-axis density is capped by ``budget``."""
    d = len(box)
    if d == 0:
        return np.zeros((0, 1))
    k = max(2, min(int(density), int(math.floor(budget ** (1.0 / d)))))
    axes = [lo + (hi - lo) * (np.arange(k) + 0.5) / k for lo, hi in box]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.ravel() for g in mesh])


def _spread(points: np.ndarray, k: int) -> np.ndarray:
    if len(points) <= k:
        return points
    idx = np.linspace(0, len(points) - 1, k).round().astype(int)
    return points[idx]


def angle_lift_morphism(source: SuperManifoldModel, target: SuperManifoldModel, lifts, odd,
                        name: str = "", density: int = 181, max_samples: int = 3) -> MorphismModel:
    """Morphism into a product of angle-window circles from angle lifts.

    ``lifts[r]`` is a real-valued expression (text) in the source's standard
    coordinates giving the r-th target angle up to multiples of ``2 pi``; ``odd``
    gives the odd target components.  For every source chart, target chart
    and window shift one piece is produced, valid where the shifted lift lands
    in the target window.
    """
    coords = CoordinateSystem.standard(source.m, source.n)
    lift_e = [parse(t, coords) for t in lifts]
    odd_e = [parse(t, coords) for t in odd]
    if len(lift_e) != target.m or len(odd_e) != target.n:
        raise ModelError("lift/odd component counts do not match the target dimension")
    probe = SuperMap(coords, lift_e, len(lift_e))
    pieces = []
    for sc in source.charts:
        if sc.box is None:
            raise ModelError(f"source chart {sc.id!r} needs a box")
        pts = grid(sc.box, density)
        pts = pts[:, sc.domain.evaluate(pts)]
        vals = probe.body(pts)
        for tc in target.charts:
            shifts = []
            for r, (lo, hi) in enumerate(tc.box):
                kmin = math.ceil((lo - vals[r].max()) / (2 * math.pi)) - 1
                kmax = math.floor((hi - vals[r].min()) / (2 * math.pi)) + 1
                shifts.append(range(kmin, kmax + 1))
            for ks in itertools.product(*shifts):
                comps = [add(e, const(2 * math.pi * k)) if k else e for e, k in zip(lift_e, ks)]
                smap = SuperMap(coords, comps + odd_e, target.m)
                body = {i: smap.forms[i].body for i in range(target.m)}
                pred = conjoin(sc.domain, tc.domain.substitute(body))
                inside = pred.evaluate(pts)
                if not inside.any():
                    continue
                samples = _spread(pts[:, inside].T, max_samples)
                pieces.append(MorphismPiece(sc.id, tc.id, smap, pred, samples))
    return MorphismModel(source, target, tuple(pieces), name,
                         metadata={"lifts": list(lifts), "odd": list(odd)})


def restrict_morphism(H: MorphismModel, X: SuperManifoldModel, t: float, density: int = 181,
                      max_samples: int = 3) -> MorphismModel:
    """``H(., t)`` for a morphism on ``X x R^{1|0}`` built by :func:`product_model`."""
    factors = H.source.metadata.get("factors")
    if not factors or H.source.m != X.m + 1 or H.source.n != X.n:
        raise ModelError("homotopy source must be the product of X with R^{1|0}")
    coords = CoordinateSystem.standard(X.m, X.n)
    sub = {X.m: Const(float(t))}
    pieces = []
    for p in H.pieces:
        xc = factors[p.source_chart][0]
        smap = p.map.substitute_even(sub, coords)
        pred = p.predicate.substitute(sub)
        chart = X.chart(xc)
        pts = grid(chart.box, density) if chart.box is not None else np.zeros((X.m, 0))
        inside = pred.evaluate(pts) if pts.size else np.zeros(0, bool)
        if not inside.any():
            continue
        pieces.append(MorphismPiece(xc, p.target_chart, smap, pred, _spread(pts[:, inside].T, max_samples)))
    return MorphismModel(X, H.target, tuple(pieces), f"{H.name}@{t:g}")
