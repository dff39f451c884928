"""Coordinate-slice sub supermanifolds."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..atlas.model import SuperManifoldModel
from ..errors import ModelError


@dataclass(frozen=True)
class Slice:
    """In one carrier chart: the coordinates set to zero and the oriented frame of the rest.

    Indices are 0-based.  ``even_frame``/``odd_frame`` list the retained
    coordinates in the order declared positive; the signs flip the first vector.
    """

    zero_even: tuple[int, ...]
    zero_odd: tuple[int, ...]
    even_frame: tuple[int, ...]
    odd_frame: tuple[int, ...]
    even_sign: int = 1
    odd_sign: int = 1

    def frame_matrices(self, m: int, n: int) -> tuple[np.ndarray, np.ndarray]:
        E0 = np.zeros((m, len(self.even_frame)))
        for col, i in enumerate(self.even_frame):
            E0[i, col] = 1.0
        E1 = np.zeros((n, len(self.odd_frame)))
        for col, j in enumerate(self.odd_frame):
            E1[j, col] = 1.0
        if E0.shape[1]:
            E0[:, 0] *= self.even_sign
        if E1.shape[1]:
            E1[:, 0] *= self.odd_sign
        return E0, E1


@dataclass(frozen=True, eq=False)
class SubmanifoldModel:
    ambient: SuperManifoldModel
    slices: dict          # carrier chart id -> Slice
    name: str = "Z"
    closed: bool = True

    def __post_init__(self):
        dims = set()
        for cid, s in self.slices.items():
            self.ambient.chart(cid)
            if sorted(s.zero_even + s.even_frame) != list(range(self.ambient.m)):
                raise ModelError(f"slice in {cid!r}: zero and frame even indices must partition 0..{self.ambient.m - 1}")
            if sorted(s.zero_odd + s.odd_frame) != list(range(self.ambient.n)):
                raise ModelError(f"slice in {cid!r}: zero and frame odd indices must partition 0..{self.ambient.n - 1}")
            if s.even_sign not in (1, -1) or s.odd_sign not in (1, -1):
                raise ModelError(f"slice in {cid!r}: frame signs must be +1 or -1")
            dims.add((len(s.even_frame), len(s.odd_frame)))
        if len(dims) > 1:
            raise ModelError("slice dimensions differ between carrier charts", dims=sorted(dims))
        if not self.slices:
            raise ModelError("a submanifold needs at least one carrier chart")

    @property
    def m(self) -> int:
        return len(next(iter(self.slices.values())).even_frame)

    @property
    def n(self) -> int:
        return len(next(iter(self.slices.values())).odd_frame)

    @property
    def dim(self) -> str:
        return f"{self.m}|{self.n}"


def coordinate_slice(ambient: SuperManifoldModel, carriers, zero_even, zero_odd, name: str = "Z",
                     even_sign: int = 1, odd_sign: int = 1) -> SubmanifoldModel:
    """Same slice in every carrier chart; frames are the retained coordinates in order."""
    ze, zo = tuple(sorted(zero_even)), tuple(sorted(zero_odd))
    ef = tuple(i for i in range(ambient.m) if i not in ze)
    of = tuple(j for j in range(ambient.n) if j not in zo)
    s = Slice(ze, zo, ef, of, even_sign, odd_sign)
    return SubmanifoldModel(ambient, {c: s for c in carriers}, name)
