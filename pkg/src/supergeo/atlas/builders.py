"""Constructors for the built-in atlases: twisted circles, products, lines.

Circles use two angle windows, ``U: -pi < x1 < pi`` and ``V: 0 < x1 < 2 pi``.
Their overlap has two arcs: on the upper arc the coordinates agree, on the
lower arc they differ by ``2 pi`` and the chosen fibre/odd coordinates flip sign.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from ..superexpr import CoordinateSystem
from ..superexpr.nodes import EvenVar, OddVar, add, const, neg, substitute
from ..superexpr.predicate import TRUE, Predicate, conjoin, parse_predicate
from .model import Chart, Overlap, PiStructure, SuperManifoldModel, TransitionMap
from .supermap import SuperMap

TWO_PI = 2.0 * math.pi
_ARC1 = (0.25 * math.pi, 0.5 * math.pi, 0.75 * math.pi)
_FIBRE = (0.3, -0.7, 1.1)
FIBRE_BOX = (-2.0, 2.0)


def twisted_circle(name: str, m: int = 1, n: int = 1, flip_even=(), flip_odd=(),
                   description: str = "", pi: bool = False) -> SuperManifoldModel:
    """Circle of angle ``x1`` with ``m - 1`` fibre coordinates and ``n`` odd ones.

    ``flip_even`` (1-based, >= 2) and ``flip_odd`` (1-based) name the
    coordinates negated when going once around the circle.
    """
    coords = CoordinateSystem.standard(m, n)
    fe, fo = set(flip_even), set(flip_odd)
    if 1 in fe:
        raise ValueError("the angle coordinate cannot be flipped")

    def comps(shift: float, twisted: bool):
        ev = [add(EvenVar(0), const(shift))]
        ev += [neg(EvenVar(i)) if twisted and (i + 1) in fe else EvenVar(i) for i in range(1, m)]
        od = [neg(OddVar(j)) if twisted and (j + 1) in fo else OddVar(j) for j in range(n)]
        return SuperMap(coords, ev + od, m)

    def samples(angles):
        pts = []
        for k, a in enumerate(angles):
            pts.append([a] + [_FIBRE[(k + i) % len(_FIBRE)] for i in range(m - 1)])
        return np.array(pts)

    fibre_box = (FIBRE_BOX,) * (m - 1)
    U = Chart("U", coords, parse_predicate("-pi < x1 < pi", coords), ((-math.pi, math.pi),) + fibre_box)
    V = Chart("V", coords, parse_predicate("0 < x1 < 2*pi", coords), ((0.0, TWO_PI),) + fibre_box)
    upper = samples(_ARC1)
    pred = lambda s: parse_predicate(s, coords)   # noqa: E731
    t_uv = [
        TransitionMap("U", "V", comps(0.0, False), (Overlap(pred("0 < x1 < pi"), upper),)),
        TransitionMap("U", "V", comps(TWO_PI, True), (Overlap(pred("-pi < x1 < 0"), samples([-a for a in _ARC1])),)),
    ]
    t_vu = [
        TransitionMap("V", "U", comps(0.0, False), (Overlap(pred("0 < x1 < pi"), upper),)),
        TransitionMap("V", "U", comps(-TWO_PI, True), (Overlap(pred("pi < x1 < 2*pi"),
                                                                  samples([TWO_PI - a for a in _ARC1])),)),
    ]
    ps = PiStructure.identity(["U", "V"], m) if pi else None
    return SuperManifoldModel(name, m, n, (U, V), tuple(t_uv + t_vu), compact_body=(m == 1),
                              pi_structure=ps, description=description)


def line_model(name: str = "R", box=(0.0, 1.0)) -> SuperManifoldModel:
    """The superdomain ``R^{1|0}`` with one chart ``L``; used as a homotopy parameter."""
    coords = CoordinateSystem.standard(1, 0)
    chart = Chart("L", coords, TRUE, (tuple(box),))
    return SuperManifoldModel(name, 1, 0, (chart,), (), compact_body=False)


def _shift_predicate(p: Predicate, offset: int, count: int) -> Predicate:
    if offset == 0:
        return p
    return p.substitute({i: EvenVar(i + offset) for i in range(count)})


def _shift_map(smap: SuperMap, even_off: int, odd_off: int) -> tuple[list, list]:
    ev = {i: EvenVar(i + even_off) for i in range(smap.m)}
    od = {j: OddVar(j + odd_off) for j in range(smap.n)}
    comps = [substitute(e, even=ev, odd=od) for e in smap.components]
    return comps[: smap.m_out], comps[smap.m_out:]


def _pieces(model: SuperManifoldModel, a: str, b: str):
    """Transition pieces ``a -> b`` of one factor, identity included when ``a == b``."""
    if a == b:
        chart = model.chart(a)
        pts = _chart_samples(model, a)
        return [(SuperMap.identity(chart.coords), [Overlap(chart.domain, pts)])]
    return [(t.map, list(t.overlaps)) for t in model.transitions_between(a, b)]


def _chart_samples(model: SuperManifoldModel, cid: str) -> np.ndarray:
    """A few points of a chart, taken from its transitions' samples."""
    pts = [s for t in model.transitions_from(cid) for o in t.overlaps for s in o.samples]
    if not pts:
        box = model.chart(cid).box
        pts = [[0.5 * (lo + hi) for lo, hi in box]] if box else [[0.0] * model.m]
    return np.array(pts[:3])


def product_model(A: SuperManifoldModel, B: SuperManifoldModel, name: str | None = None,
                  pi: bool = False, max_samples: int = 3, description: str = "") -> SuperManifoldModel:
    """Product atlas; chart ``a*b`` has the coordinates of ``a`` followed by those of ``b``."""
    m, n = A.m + B.m, A.n + B.n
    coords = CoordinateSystem.standard(m, n)
    charts = []
    factors = {}
    for ca, cb in itertools.product(A.charts, B.charts):
        cid = f"{ca.id}*{cb.id}"
        box = tuple(ca.box) + tuple(cb.box) if ca.box is not None and cb.box is not None else None
        charts.append(Chart(cid, coords, conjoin(ca.domain, _shift_predicate(cb.domain, A.m, B.m)), box))
        factors[cid] = [ca.id, cb.id]
    transitions = []
    for (ca, cb), (da, db) in itertools.product(itertools.product(A.charts, B.charts), repeat=2):
        if (ca.id, cb.id) == (da.id, db.id):
            continue
        for (ma, oas), (mb, obs) in itertools.product(_pieces(A, ca.id, da.id), _pieces(B, cb.id, db.id)):
            ea, oa = _shift_map(ma, 0, 0)
            eb, ob = _shift_map(mb, A.m, A.n)
            smap = SuperMap(coords, ea + eb + oa + ob, m)
            overlaps = []
            for o1, o2 in itertools.product(oas, obs):
                pred = conjoin(o1.predicate, _shift_predicate(o2.predicate, A.m, B.m))
                pts = [np.concatenate([s1, s2]) for s1, s2 in itertools.product(o1.samples, o2.samples)]
                pts = pts[:: max(1, len(pts) // max_samples)][:max_samples]
                overlaps.append(Overlap(pred, np.array(pts)))
            transitions.append(TransitionMap(f"{ca.id}*{cb.id}", f"{da.id}*{db.id}", smap, tuple(overlaps)))
    ps = PiStructure.identity([c.id for c in charts], m) if pi else None
    return SuperManifoldModel(name or f"{A.name}x{B.name}", m, n, tuple(charts), tuple(transitions),
                              compact_body=A.compact_body and B.compact_body, pi_structure=ps,
                              description=description,
                              metadata={"factors": factors, "factor_models": [A.name, B.name]})
