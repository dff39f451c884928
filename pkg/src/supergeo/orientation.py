"""Orienting cover of an atlas model: sign-labelled chart graph, deck action, classification.

Nodes are ``(chart, s0, s1)`` with signs in ``{+1, -1}``: the chart with its
first even and first odd coordinate multiplied by ``s0`` and ``s1``.  A
transition overlap with reduced determinant signs ``(sigma0, sigma1)`` joins
``(i, s0, s1)`` to ``(j, s0*sigma0, s1*sigma1)``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

import numpy as np

from .atlas.model import SuperManifoldModel
from .errors import DegeneracyError, OrientationError

GROUP = ((0, 0), (0, 1), (1, 0), (1, 1))
SIGN_TOL = 1e-9

Node = tuple  # (chart id, s0, s1)


def deck_action(g: tuple[int, int], node: Node) -> Node:
    """``(a, b) . (U, s0, s1) = (U, (-1)^a s0, (-1)^b s1)``."""
    a, b = g
    chart, s0, s1 = node
    return (chart, s0 * (-1) ** a, s1 * (-1) ** b)


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _sign_of_det(mat: np.ndarray, tol: float) -> int:
    d = 1.0 if mat.size == 0 else float(np.linalg.det(mat))
    if abs(d) < tol:
        return 0
    return 1 if d > 0 else -1


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    overlap: int
    sigma0: int
    sigma1: int
    sample: tuple[float, ...]


@dataclass
class OrientingCover:
    model: str
    charts: list[str]
    edges: list[Edge]
    nodes: list[Node]
    component_of: dict          # node -> component index (0-based, base component first)
    stabilizer: list[tuple[int, int]]

    @property
    def base(self) -> Node:
        return (self.charts[0], 1, 1)

    @property
    def component_count(self) -> int:
        return len(set(self.component_of.values()))

    def components(self) -> list[list[Node]]:
        out: dict[int, list[Node]] = {}
        for nd in self.nodes:
            out.setdefault(self.component_of[nd], []).append(nd)
        return [out[k] for k in sorted(out)]

    def label(self, a: int, b: int) -> str:
        return f"P_{a}^{b}"

    def component_label(self, comp: int) -> str:
        """Name of a component: the first ``P_a^b`` (in group order) that it contains."""
        for a, b in GROUP:
            if self.component_of[deck_action((a, b), self.base)] == comp:
                return self.label(a, b)
        return f"P[{comp}]"

    def deck_table(self) -> dict[tuple[int, int], dict[str, str]]:
        """Induced action on the components ``P_a^b`` that contain ``(a, b) . base``.

        Rows are group elements, columns the four labels; entries are labels of
        image components (labels coincide when components do).
        """
        table = {}
        for g in GROUP:
            row = {}
            for a, b in GROUP:
                src = deck_action((a, b), self.base)
                comp = self.component_of[deck_action(g, src)]
                row[self.label(a, b)] = self.component_label(comp)
            table[g] = row
        return table


def chart_signs(model: SuperManifoldModel, tol: float = SIGN_TOL, all_samples: bool = False) -> list[Edge]:
    """One labelled edge per overlap component (signs at its first sample)."""
    edges = []
    for t in model.transitions:
        for k, o in enumerate(t.overlaps):
            pts = o.samples if all_samples else o.samples[:1]
            if len(pts) == 0:
                continue
            seen = None
            for p in pts:
                x = p.reshape(-1, 1)
                s0 = _sign_of_det(t.map.even_block(x)[..., 0], tol)
                s1 = _sign_of_det(t.map.odd_block(x)[..., 0], tol)
                if s0 == 0 or s1 == 0:
                    raise DegeneracyError(f"reduced determinant below {tol} on {t.label}",
                                          transition=t.label, overlap=k, sample=p.tolist())
                if seen is not None and seen != (s0, s1):
                    raise DegeneracyError(f"signs change inside one overlap component of {t.label}; "
                                          "the component is probably not connected",
                                          transition=t.label, overlap=k, sample=p.tolist())
                seen = (s0, s1)
            edges.append(Edge(t.source, t.target, k, seen[0], seen[1], tuple(map(float, pts[0]))))
    return edges


def _components(charts, edges, use0=True, use1=True):
    nodes = [(c, s0, s1) for c in charts for s0 in (1, -1) for s1 in (1, -1)]
    uf = _UnionFind(nodes)
    for e in edges:
        f0 = e.sigma0 if use0 else 1
        f1 = e.sigma1 if use1 else 1
        for s0, s1 in itertools.product((1, -1), repeat=2):
            uf.union((e.source, s0, s1), (e.target, s0 * f0, s1 * f1))
    return nodes, uf


def build_orienting_cover(model: SuperManifoldModel, tol: float = SIGN_TOL,
                          all_samples: bool = False) -> OrientingCover:
    charts = model.chart_ids
    edges = chart_signs(model, tol, all_samples)
    nodes, uf = _components(charts, edges)
    base = (charts[0], 1, 1)
    ids: dict = {}
    # number components so that the base component comes first, then by node order
    for nd in [base] + nodes:
        ids.setdefault(uf.find(nd), len(ids))
    component_of = {nd: ids[uf.find(nd)] for nd in nodes}
    stab = [g for g in GROUP if component_of[deck_action(g, base)] == component_of[base]]
    return OrientingCover(model.name, charts, edges, nodes, component_of, stab)


class Tag(str, enum.Enum):
    ORIENTABLE = "Orientable"
    SEMI = "SemiOrientable"
    NON = "Nonorientable"


@dataclass(frozen=True)
class OrientabilityClass:
    tag: Tag
    component_count: int
    body_orientable: bool
    bundle_orientable: bool
    generator: tuple[int, int] | None = None

    def to_dict(self) -> dict:
        out = {"tag": self.tag.value, "components": self.component_count,
               "body_orientable": self.body_orientable, "bundle_orientable": self.bundle_orientable}
        if self.generator is not None:
            out["generator"] = list(self.generator)
        return out


def _orientable_with(charts, edges, which: int) -> bool:
    """Classical orientability of the body (``which = 0``) or of the odd bundle (``which = 1``)."""
    nodes, uf = _components(charts, edges, use0=(which == 0), use1=(which == 1))
    base = (charts[0], 1, 1)
    flip = (charts[0], -1, 1) if which == 0 else (charts[0], 1, -1)
    return uf.find(base) != uf.find(flip)


def classify(model: SuperManifoldModel, tol: float = SIGN_TOL, cover: OrientingCover | None = None) -> OrientabilityClass:
    cover = cover or build_orienting_cover(model, tol)
    count = len(cover.stabilizer)
    if count == 1:
        tag, gen = Tag.ORIENTABLE, None
    elif count == 2:
        tag, gen = Tag.SEMI, next(g for g in cover.stabilizer if g != (0, 0))
    else:
        tag, gen = Tag.NON, None
    return OrientabilityClass(tag, cover.component_count,
                              _orientable_with(cover.charts, cover.edges, 0),
                              _orientable_with(cover.charts, cover.edges, 1), gen)


def bundle_view_check(model: SuperManifoldModel, tol: float = SIGN_TOL) -> bool:
    """Orientable exactly when both the body and the odd bundle are orientable."""
    c = classify(model, tol)
    return (c.tag is Tag.ORIENTABLE) == (c.body_orientable and c.bundle_orientable)


def chart_orientation(model: SuperManifoldModel, tol: float = SIGN_TOL) -> dict[str, tuple[int, int]]:
    """Sign pair per chart selecting the base component ``P_0^0`` as the orientation.

    Raises :class:`OrientationError` unless the model is orientable.
    """
    cover = build_orienting_cover(model, tol)
    if len(cover.stabilizer) != 1:
        raise OrientationError(f"model {model.name!r} is not orientable", components=cover.component_count)
    base_comp = cover.component_of[cover.base]
    out = {}
    for c in cover.charts:
        for s0, s1 in itertools.product((1, -1), repeat=2):
            if cover.component_of[(c, s0, s1)] == base_comp:
                out[c] = (s0, s1)
    return out


def random_sign_cocycle_model(rng: np.random.Generator, charts: int = 3, name: str | None = None) -> SuperManifoldModel:
    """A cycle of ``charts`` charts glued by diagonal linear maps with random signs.

    Each consecutive pair shares one overlap; ``x' = s0 x`` and ``xi' = s1 xi``
    on it, with the reverse transition using the same signs.
    """
    from .atlas.model import Chart, Overlap, TransitionMap
    from .atlas.supermap import SuperMap
    from .superexpr import CoordinateSystem
    from .superexpr.nodes import EvenVar, OddVar, neg
    from .superexpr.predicate import parse_predicate

    coords = CoordinateSystem.standard(1, 1)
    ids = [f"C{i}" for i in range(charts)]
    chart_list = tuple(Chart(c, coords, parse_predicate("-1 < x1 < 1", coords), ((-1.0, 1.0),)) for c in ids)
    trans = []
    for i in range(charts):
        a, b = ids[i], ids[(i + 1) % charts]
        s0, s1 = (int(v) for v in rng.choice([-1, 1], size=2))
        comps = [EvenVar(0) if s0 > 0 else neg(EvenVar(0)), OddVar(0) if s1 > 0 else neg(OddVar(0))]
        smap = SuperMap(coords, comps, 1)
        # each edge gets its own small window so no spurious triple overlaps appear
        c = 0.2 + 0.7 * i / charts
        fwd = parse_predicate(f"{c - 0.05} < x1 < {c + 0.05}", coords)
        lo, hi = sorted((s0 * (c - 0.05), s0 * (c + 0.05)))
        back = parse_predicate(f"{lo} < x1 < {hi}", coords)
        trans.append(TransitionMap(a, b, smap, (Overlap(fwd, np.array([[c]])),)))
        trans.append(TransitionMap(b, a, smap, (Overlap(back, np.array([[s0 * c]])),)))
    return SuperManifoldModel(name or "random_cocycle", 1, 1, chart_list, tuple(trans))
