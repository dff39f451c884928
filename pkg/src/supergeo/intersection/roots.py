"""Grid-seeded batched Newton iteration and root deduplication."""

from __future__ import annotations

import logging

import numpy as np

from ..errors import ResolutionError

log = logging.getLogger("supergeo.roots")

AMBIGUITY_RADIUS = 1e-6


def newton(F, J, seeds: np.ndarray, tol: float, max_iter: int = 60) -> np.ndarray:
    """Refine every seed column; returns the converged roots as columns ``(d, k)``.

    ``F(x)`` maps ``(d, G) -> (d, G)`` and ``J(x)`` maps ``(d, G) -> (d, d, G)``.
    Seeds whose Jacobian turns singular away from a root are dropped.
    """
    x = np.array(seeds, dtype=float)
    d = x.shape[0]
    if x.size == 0:
        return x.reshape(d, 0)
    alive = np.ones(x.shape[1], dtype=bool)
    done = np.zeros(x.shape[1], dtype=bool)
    dropped = 0
    for _ in range(max_iter):
        idx = np.flatnonzero(alive & ~done)
        if idx.size == 0:
            break
        xs = x[:, idx]
        fx = F(xs)
        jx = np.moveaxis(J(xs), -1, 0)            # (G, d, d)
        with np.errstate(all="ignore"):
            det = np.linalg.det(jx) if d else np.ones(idx.size)
        finite = np.isfinite(det) & np.all(np.isfinite(fx), axis=0)
        ok = finite & (np.abs(det) > 1e-14)
        # a singular Jacobian at a point that already solves the system is a
        # degenerate root: keep it so the caller can report the degeneracy
        landed = finite & ~ok & (np.max(np.abs(fx), axis=0, initial=0.0) < tol)
        done[idx[landed]] = True
        dropped += int(np.sum(~ok & ~landed))
        alive[idx[~ok & ~landed]] = False
        idx, fx, jx, xs = idx[ok], fx[:, ok], jx[ok], xs[:, ok]
        if idx.size == 0:
            break
        step = np.linalg.solve(jx, fx.T[..., None])[..., 0].T
        x[:, idx] = xs - step
        small = np.max(np.abs(step), axis=0) <= tol * (1.0 + np.max(np.abs(xs), axis=0))
        done[idx[small & (np.max(np.abs(fx), axis=0) < tol)]] = True
    if dropped:
        log.debug("newton: %d seeds dropped at singular or non-finite Jacobians", dropped)
    res = np.max(np.abs(F(x[:, done])), axis=0) if done.any() else np.zeros(0)
    good = np.flatnonzero(done)[np.isfinite(res) & (res < tol)]
    return x[:, good]


def dedup(points: np.ndarray, radius: float, ambiguity: float = AMBIGUITY_RADIUS,
          loose=None) -> tuple[np.ndarray, np.ndarray]:
    """Merge columns closer than ``radius``; raise if two are in the ambiguous band.

    Columns flagged ``loose`` (degenerate roots, which Newton only reaches
    linearly) merge with anything within ``ambiguity``.  Returns the kept
    columns and their flags.
    """
    loose = np.zeros(points.shape[1], bool) if loose is None else np.asarray(loose, bool)
    kept: list[np.ndarray] = []
    flags: list[bool] = []
    for p, lp in zip(points.T, loose):
        merged = False
        for k, q in enumerate(kept):
            d = np.max(np.abs(p - q)) if p.size else 0.0
            if d < radius or ((lp or flags[k]) and d < ambiguity):
                flags[k] = flags[k] or bool(lp)
                merged = True
                break
            if d < ambiguity:
                raise ResolutionError("two roots closer than the ambiguity radius: a near-tangency or "
                                      "roots the grid cannot separate; perturb the input, refine the "
                                      "grid or tighten the Newton tolerance", distance=float(d))
        if not merged:
            kept.append(p)
            flags.append(bool(lp))
    return np.array(kept).T.reshape(points.shape[0], len(kept)), np.array(flags, bool)
