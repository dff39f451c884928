"""Body intersection points of a morphism with a coordinate-slice submanifold, and their sign pairs."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ..atlas.model import SuperManifoldModel
from ..atlas.morphism import MorphismModel, MorphismPiece, grid
from ..errors import ModelError, NonTransversalError, ResolutionError
from ..orientation import SIGN_TOL, chart_orientation
from .roots import AMBIGUITY_RADIUS, dedup, newton
from .submanifold import SubmanifoldModel

log = logging.getLogger("supergeo.intersection")


@dataclass(frozen=True)
class SignPair:
    even: int
    odd: int

    def __add__(self, other: "SignPair") -> "SignPair":
        return SignPair(self.even + other.even, self.odd + other.odd)

    def as_tuple(self) -> tuple[int, int]:
        return (self.even, self.odd)


@dataclass(frozen=True)
class IntersectionPoint:
    chart: str                   # source chart of X
    point: tuple[float, ...]
    target_chart: str
    image: tuple[float, ...]
    det_even: float
    det_odd: float
    sign: SignPair
    cond_even: float = 1.0
    cond_odd: float = 1.0

    def to_dict(self) -> dict:
        return {"chart": self.chart, "point": list(self.point), "target_chart": self.target_chart,
                "image": list(self.image), "det_even": self.det_even, "det_odd": self.det_odd,
                "sign": list(self.sign.as_tuple()), "cond_even": self.cond_even, "cond_odd": self.cond_odd}


@dataclass
class IntersectionReport:
    morphism: str
    submanifold: str
    points: list[IntersectionPoint] = field(default_factory=list)
    newton_tol: float = 1e-10
    sign_tol: float = SIGN_TOL

    @property
    def transversal(self) -> bool:
        return all(p.sign.even != 0 and p.sign.odd != 0 for p in self.points)

    @property
    def total(self) -> SignPair:
        out = SignPair(0, 0)
        for p in self.points:
            out = out + p.sign
        return out

    def to_dict(self) -> dict:
        return {"morphism": self.morphism, "submanifold": self.submanifold,
                "points": [p.to_dict() for p in self.points], "transversal": self.transversal,
                "pair": list(self.total.as_tuple()), "newton_tol": self.newton_tol,
                "sign_tol": self.sign_tol}


def _check_dimensions(f: MorphismModel, Z: SubmanifoldModel) -> None:
    X, Y = f.source, f.target
    if Z.ambient is not Y and Z.ambient.name != Y.name:
        raise ModelError("submanifold does not live in the target of the morphism")
    if X.m + Z.m != Y.m or X.n + Z.n != Y.n:
        raise ModelError(f"dimensions are not complementary: {X.dim} + {Z.dim} != {Y.dim}")
    if not X.compact_body:
        raise ModelError("source body must be compact")
    if not Z.closed:
        raise ModelError("submanifold must be closed")


def _roots_of_piece(p: MorphismPiece, zero_even, seeds: np.ndarray, tol: float) -> np.ndarray:
    rows = list(zero_even)

    def F(x):
        return p.map.body(x)[rows]

    def J(x):
        return p.map.even_block(x)[rows]

    inside = p.predicate.evaluate(seeds) if seeds.size else np.zeros(0, bool)
    roots = newton(F, J, seeds[:, inside], tol)
    if roots.size:
        roots = roots[:, p.predicate.evaluate(roots)]
    return roots


def merge_across_charts(model: SuperManifoldModel, found: list, radius: float,
                        ambiguity: float = AMBIGUITY_RADIUS, loose=None) -> list:
    """Drop entries ``(chart, x, ...)`` that reappear in another chart's coordinates.

    Entries flagged in ``loose`` (degenerate roots) match within ``ambiguity``.
    """
    loose = [False] * len(found) if loose is None else list(loose)
    kept: list = []
    kept_loose: list = []
    for item, lp in zip(found, loose):
        chart, x = item[0], np.asarray(item[1])
        duplicate = False
        for other, lo in zip(kept, kept_loose):
            y = model.map_point(chart, other[0], x)
            if y is None:
                continue
            d = float(np.max(np.abs(y - np.asarray(other[1])))) if y.size else 0.0
            if d < radius or ((lp or lo) and d < ambiguity):
                duplicate = True
                break
            if d < ambiguity:
                raise ResolutionError("a root seen from two charts does not match within the "
                                      "deduplication radius", charts=[chart, other[0]], distance=d)
        if not duplicate:
            kept.append(item)
            kept_loose.append(lp)
    return kept


def _degenerate(jac, roots: np.ndarray, tol: float) -> np.ndarray:
    if roots.shape[1] == 0:
        return np.zeros(0, bool)
    J = np.moveaxis(jac(roots), -1, 0)
    return np.abs(np.linalg.det(J)) < tol if J.shape[1] else np.zeros(roots.shape[1], bool)


def find_body_intersections(f: MorphismModel, Z: SubmanifoldModel, grid_density: int = 64,
                            newton_tol: float = 1e-10, budget: int = 20000,
                            sign_tol: float = SIGN_TOL) -> list[tuple[str, np.ndarray, MorphismPiece]]:
    """Points of ``|X|`` whose image lies in ``|Z|``, one entry per geometric point.

    Each entry is ``(source chart, x, piece)`` where the piece's target chart
    carries a slice of ``Z``.  Roots where the sliced body Jacobian is below
    ``sign_tol`` are degenerate; they are merged loosely and kept so that the
    sign computation reports them.
    """
    _check_dimensions(f, Z)
    X = f.source
    radius = 10.0 * newton_tol
    found, flags = [], []
    for chart in X.charts:
        if chart.box is None:
            raise ModelError(f"chart {chart.id!r} needs a box to seed the root search")
        seeds = grid(chart.box, grid_density, budget)
        seeds = seeds[:, chart.domain.evaluate(seeds)]
        roots, pieces, loose = [], [], []
        for p in f.pieces_from(chart.id):
            sl = Z.slices.get(p.target_chart)
            if sl is None:
                continue
            r = _roots_of_piece(p, sl.zero_even, seeds, newton_tol)
            rows = list(sl.zero_even)
            roots.append(r)
            pieces += [p] * r.shape[1]
            loose.append(_degenerate(lambda x, p=p: p.map.even_block(x)[rows], r, sign_tol))
        if not pieces:
            continue
        allr = np.hstack(roots)
        uniq, uflags = dedup(allr, radius, loose=np.concatenate(loose))
        for u, fl in zip(uniq.T, uflags):
            k = int(np.argmin(np.max(np.abs(allr - u[:, None]), axis=0)))
            found.append((chart.id, u, pieces[k]))
            flags.append(bool(fl))
    out = merge_across_charts(X, found, radius, loose=flags)
    log.info("found %d body intersection points of %s with %s", len(out), f.name, Z.name)
    return out


def _det(mat: np.ndarray) -> float:
    return 1.0 if mat.size == 0 else float(np.linalg.det(mat))


def _cond(mat: np.ndarray) -> float:
    return 1.0 if mat.size == 0 else float(np.linalg.cond(mat))


def _sign(d: float, tol: float) -> int:
    return 0 if abs(d) < tol else (1 if d > 0 else -1)


def comparison_matrices(f: MorphismModel, Z: SubmanifoldModel, chart: str, x, piece: MorphismPiece | None = None,
                        orientations: tuple[dict, dict] | None = None) -> tuple[np.ndarray, np.ndarray, MorphismPiece]:
    """``J0 = [df(E0_X) | E0_Z]`` and ``J1 = [df(E1_X) | E1_Z]`` in the positive frame of ``Y``."""
    X, Y = f.source, f.target
    x = np.asarray(x, dtype=float)
    piece = piece or f.locate(chart, x)
    ox, oy = orientations or (chart_orientation(X), chart_orientation(Y))
    s0, s1 = ox[chart]
    t0, t1 = oy[piece.target_chart]
    col = x.reshape(-1, 1)
    A = piece.map.even_block(col)[..., 0]
    H = piece.map.odd_block(col)[..., 0]
    E0, E1 = Z.slices[piece.target_chart].frame_matrices(Y.m, Y.n)
    J0 = np.hstack([A, E0])
    J1 = np.hstack([H, E1])
    # positive frames flip the first coordinate vector by the chart sign
    if X.m:
        J0[:, 0] *= s0
    if X.n:
        J1[:, 0] *= s1
    if Y.m:
        J0[0, :] *= t0
    if Y.n:
        J1[0, :] *= t1
    return J0, J1, piece


def point_data_at(f: MorphismModel, Z: SubmanifoldModel, chart: str, x, piece: MorphismPiece | None = None,
                  sign_tol: float = SIGN_TOL, orientations: tuple[dict, dict] | None = None) -> IntersectionPoint:
    """Signs of ``det J0`` and ``det J1`` with the image point and conditioning."""
    x = np.asarray(x, dtype=float)
    J0, J1, piece = comparison_matrices(f, Z, chart, x, piece, orientations)
    d0, d1 = _det(J0), _det(J1)
    img = piece.map.body(x.reshape(-1, 1))[:, 0]
    return IntersectionPoint(chart, tuple(map(float, x)), piece.target_chart, tuple(map(float, img)),
                             d0, d1, SignPair(_sign(d0, sign_tol), _sign(d1, sign_tol)), _cond(J0), _cond(J1))


def intersection_report(f: MorphismModel, Z: SubmanifoldModel, grid_density: int = 64,
                        newton_tol: float = 1e-10, sign_tol: float = SIGN_TOL,
                        orientations: tuple[dict, dict] | None = None) -> IntersectionReport:
    """All intersection points with their sign pairs (zeros mark non-transversal points).

    ``orientations`` overrides the chart sign choices of source and target.
    """
    found = find_body_intersections(f, Z, grid_density, newton_tol, sign_tol=sign_tol)
    orient = orientations or (chart_orientation(f.source), chart_orientation(f.target))
    rep = IntersectionReport(f.name, Z.name, newton_tol=newton_tol, sign_tol=sign_tol)
    for chart, x, piece in found:
        rep.points.append(point_data_at(f, Z, chart, x, piece, sign_tol, orient))
    return rep


def sign_pair_at(f: MorphismModel, Z: SubmanifoldModel, chart: str, x, sign_tol: float = SIGN_TOL) -> SignPair:
    return point_data_at(f, Z, chart, x, sign_tol=sign_tol).sign


def intersection_pair(f: MorphismModel, Z: SubmanifoldModel, grid_density: int = 64,
                      newton_tol: float = 1e-10, sign_tol: float = SIGN_TOL) -> IntersectionReport:
    """Report whose ``total`` is the signed count of intersection points in each parity."""
    rep = intersection_report(f, Z, grid_density, newton_tol, sign_tol)
    for p in rep.points:
        if p.sign.even == 0 or p.sign.odd == 0:
            raise NonTransversalError("intersection is not transversal", chart=p.chart,
                                      point=list(p.point), det_even=p.det_even, det_odd=p.det_odd)
    return rep
