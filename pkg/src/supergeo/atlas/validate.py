"""Sample-based gluing checks: parity, local invertibility, inverse consistency, cocycle."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .._parallel import thread_map
from ..grassmann import GrassmannElement
from .model import SuperManifoldModel, TransitionMap

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class CheckRecord:
    kind: str          # parity | domain | invertible | inverse | inverse_block | cocycle
    transition: str
    sample: tuple[float, ...]
    value: float
    ok: bool
    message: str = ""

    def to_dict(self) -> dict:
        return {"kind": self.kind, "transition": self.transition, "sample": list(self.sample),
                "value": self.value, "ok": self.ok, "message": self.message}


@dataclass
class ValidationReport:
    model: str
    tol: float
    records: list[CheckRecord] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.records)

    @property
    def failures(self) -> list[CheckRecord]:
        return [r for r in self.records if not r.ok]

    def max_residual(self, kind: str) -> float:
        vals = [r.value for r in self.records if r.kind == kind]
        return max(vals) if vals else 0.0

    @property
    def max_inverse_residual(self) -> float:
        return max(self.max_residual("inverse"), self.max_residual("inverse_block"))

    @property
    def max_cocycle_residual(self) -> float:
        return self.max_residual("cocycle")

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "ok": self.ok,
            "tol": self.tol,
            "checks": len(self.records),
            "max_inverse_residual": self.max_inverse_residual,
            "max_cocycle_residual": self.max_cocycle_residual,
            "failures": [r.to_dict() for r in self.failures],
        }


def generic_point(p, n: int) -> tuple[list[GrassmannElement], list[GrassmannElement], int]:
    """Lift a body point to the Grassmann algebra on ``n + 2`` generators.

    Odd coordinates become generators 1..n; even coordinates get an even
    nilpotent part along ``g_{n+1} g_{n+2}`` so first derivatives are probed too.
    """
    N = n + 2
    eps = GrassmannElement.generator(N, n + 1) * GrassmannElement.generator(N, n + 2)
    evens = [GrassmannElement.scalar(N, float(v)) + eps * (0.37 + 0.11 * i) for i, v in enumerate(p)]
    odds = [GrassmannElement.generator(N, j + 1) for j in range(n)]
    return evens, odds, N


def _residual(a: list[GrassmannElement], b: list[GrassmannElement]) -> float:
    return max((x.max_abs_diff(y) for x, y in zip(a, b)), default=0.0)


def _det(mat: np.ndarray) -> float:
    return 1.0 if mat.size == 0 else float(np.linalg.det(mat))


def _check_transition(model: SuperManifoldModel, t: TransitionMap, tol: float) -> list[CheckRecord]:
    out: list[CheckRecord] = []
    for msg in t.map.parity_issues:
        out.append(CheckRecord("parity", t.label, (), 1.0, False, msg))
    if out:
        return out
    src = model.chart(t.source)
    dst = model.chart(t.target)
    for o in t.overlaps:
        for p in o.samples:
            key = tuple(float(v) for v in p)
            if not (o.contains(p) and src.contains(p)):
                out.append(CheckRecord("domain", t.label, key, 1.0, False,
                                       "sample outside its overlap predicate or chart domain"))
                continue
            q = t.map.body(p.reshape(-1, 1))[:, 0]
            if not np.all(np.isfinite(q)) or not dst.contains(q):
                out.append(CheckRecord("domain", t.label, key, 1.0, False, "image outside the target chart"))
                continue
            A = t.map.even_block(p.reshape(-1, 1))[..., 0]
            H = t.map.odd_block(p.reshape(-1, 1))[..., 0]
            dets = min(abs(_det(A)), abs(_det(H)))
            out.append(CheckRecord("invertible", t.label, key, dets, dets > tol,
                                   "" if dets > tol else "reduced block is singular"))
            evens, odds, N = generic_point(p, model.n)
            fe, fo = t.map.apply(evens, odds, N)
            back = model.transition_at(t.target, t.source, q)
            if back is None:
                out.append(CheckRecord("inverse", t.label, key, float("inf"), False,
                                       "no reverse transition covers the image"))
            else:
                be, bo = back.map.apply(fe, fo, N)
                r = _residual(be + bo, evens + odds)
                out.append(CheckRecord("inverse", t.label, key, r, r < tol,
                                       "" if r < tol else f"reverse {back.label} does not undo it"))
                A2 = back.map.even_block(q.reshape(-1, 1))[..., 0]
                H2 = back.map.odd_block(q.reshape(-1, 1))[..., 0]
                rb = max(np.max(np.abs(A2 @ A - np.eye(model.m)), initial=0.0),
                         np.max(np.abs(H2 @ H - np.eye(model.n)), initial=0.0))
                out.append(CheckRecord("inverse_block", t.label, key, float(rb), rb < tol))
            for t2 in model.transitions_from(t.target):
                if t2.target in (t.source, t.target) or not t2.covers(q):
                    continue
                direct = model.transition_at(t.source, t2.target, p)
                if direct is None:
                    continue
                ce, co = t2.map.apply(fe, fo, N)
                de, do = direct.map.apply(evens, odds, N)
                r = _residual(ce + co, de + do)
                out.append(CheckRecord("cocycle", f"{t.label}->{t2.target}", key, r, r < tol,
                                       "" if r < tol else f"{t2.label} after {t.label} differs from {direct.label}"))
    return out


def validate_model(model: SuperManifoldModel, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Run every gluing check at every declared sample point."""
    report = ValidationReport(model.name, tol)
    for recs in thread_map(lambda t: _check_transition(model, t, tol), model.transitions):
        report.records.extend(recs)
    return report
