"""Compatibility of maps with the parity-swapping pairing of Pi-symmetric models."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..atlas.model import PiStructure, SuperManifoldModel
from ..atlas.morphism import MorphismModel
from ..errors import ModelError

PI_TOL = 1e-8


@dataclass(frozen=True)
class PiCheck:
    ok: bool
    max_residual: float
    worst: dict | None = None
    checked: int = 0

    def to_dict(self) -> dict:
        return {"ok": self.ok, "max_residual": self.max_residual, "checked": self.checked,
                "worst": self.worst}


def pi_residual(A: np.ndarray, H: np.ndarray, perm_in, perm_out) -> float:
    """``max |H[pi_out(r), pi_in(i)] - A[r, i]|``."""
    if A.size == 0:
        return 0.0
    Hp = H[np.ix_(list(perm_out), list(perm_in))]
    return float(np.max(np.abs(Hp - A)))


def _require(model: SuperManifoldModel):
    if model.pi_structure is None:
        raise ModelError(f"model {model.name!r} has no pi-structure")
    return model.pi_structure


def _scan(items, tol: float) -> PiCheck:
    worst, best, count = None, 0.0, 0
    for label, x, A, H, pin, pout in items:
        r = pi_residual(A, H, pin, pout)
        count += 1
        if r > best or worst is None:
            best, worst = max(best, r), {"where": label, "sample": [float(v) for v in x], "residual": r}
    return PiCheck(best < tol, best, worst, count)


def check_pi_morphism(f: MorphismModel, P_X: PiStructure | None = None, P_Y: PiStructure | None = None,
                      samples=None, tol: float = PI_TOL) -> PiCheck:
    """Is the reduced odd block the even block transported by the pairings, at every sample?

    The pairings default to the models' own.  ``samples`` optionally maps
    source chart ids to extra points ``(k, m)``.
    """
    px = P_X or _require(f.source)
    py = P_Y or _require(f.target)

    def items():
        for p in f.pieces:
            pts = list(p.samples)
            for s in (samples or {}).get(p.source_chart, ()):
                if p.contains(s):
                    pts.append(np.asarray(s, dtype=float))
            for s in pts:
                col = np.asarray(s, dtype=float).reshape(-1, 1)
                yield (f"{p.source_chart}->{p.target_chart}", s, p.map.even_block(col)[..., 0],
                       p.map.odd_block(col)[..., 0], px.permutation(p.source_chart),
                       py.permutation(p.target_chart))

    return _scan(items(), tol)


def check_pi_model(model: SuperManifoldModel, tol: float = PI_TOL) -> PiCheck:
    """The same test for every transition of a model at its overlap samples."""
    ps = _require(model)

    def items():
        for t in model.transitions:
            for o in t.overlaps:
                for s in o.samples:
                    col = s.reshape(-1, 1)
                    yield (t.label, s, t.map.even_block(col)[..., 0], t.map.odd_block(col)[..., 0],
                           ps.permutation(t.source), ps.permutation(t.target))

    return _scan(items(), tol)
