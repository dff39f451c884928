"""Reference implementations used only as independent checks in the tests."""

from __future__ import annotations

import math

import numpy as np


def sort_sign(seq) -> tuple[int, tuple[int, ...]]:
    """Bubble-sort an index sequence; sign 0 on a repeated index."""
    s = list(seq)
    if len(set(s)) != len(s):
        return 0, ()
    sign = 1
    for i in range(len(s)):
        for j in range(len(s) - 1 - i):
            if s[j] > s[j + 1]:
                s[j], s[j + 1] = s[j + 1], s[j]
                sign = -sign
    return sign, tuple(s)


def term_product(a: dict, b: dict) -> dict:
    """Product of two ``{index tuple: coeff}`` dicts by concatenating and sorting words."""
    out: dict = {}
    for ia, ca in a.items():
        for ib, cb in b.items():
            sgn, idx = sort_sign(ia + ib)
            if sgn:
                out[idx] = out.get(idx, 0.0) + sgn * ca * cb
    return {k: v for k, v in out.items() if v != 0.0}


def central_difference(fn, x, i: int, h: float = 1e-5) -> float:
    x = np.array(x, dtype=float)
    e = np.zeros_like(x)
    e[i] = h
    return (fn(x + e) - fn(x - e)) / (2 * h)


def winding_number(lift, a: float = 0.0) -> int:
    """Degree of a circle map from its angle lift over one period."""
    return round((lift(a + 2 * math.pi) - lift(a)) / (2 * math.pi))


def level_crossings(lift, offset: float = 1e-3, samples: int = 20001) -> tuple[int, int]:
    """Signed and unsigned counts of times the lift crosses a multiple of ``2 pi`` over one period.

    Works from sampled values only: no derivative or Jacobian is formed.
    """
    t = np.linspace(offset, offset + 2 * math.pi, samples)
    levels = np.floor(np.array([lift(v) for v in t]) / (2 * math.pi))
    steps = np.diff(levels)
    return int(steps.sum()), int(np.abs(steps).sum())
