"""Charts, transition maps and supermanifold models."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ModelError
from ..superexpr import CoordinateSystem
from ..superexpr.predicate import TRUE, Predicate
from .supermap import SuperMap


@dataclass(frozen=True, eq=False)
class Chart:
    """A superdomain with a body-domain predicate.

    ``box`` is an optional bounding box of the body domain, one ``(lo, hi)`` per
    even coordinate; it is only used to seed grids.
    """

    id: str
    coords: CoordinateSystem
    domain: Predicate = TRUE
    box: tuple[tuple[float, float], ...] | None = None

    def contains(self, x) -> bool:
        return self.domain(x)


@dataclass(frozen=True, eq=False)
class Overlap:
    """One connected component of an overlap, on the source side."""

    predicate: Predicate
    samples: np.ndarray

    def __post_init__(self):
        s = np.atleast_2d(np.asarray(self.samples, dtype=float))
        object.__setattr__(self, "samples", s)

    def contains(self, x) -> bool:
        return self.predicate(x)


@dataclass(frozen=True, eq=False)
class TransitionMap:
    source: str
    target: str
    map: SuperMap
    overlaps: tuple[Overlap, ...]

    def covers(self, x) -> bool:
        return any(o.contains(x) for o in self.overlaps)

    @property
    def label(self) -> str:
        return f"{self.source}->{self.target}"


@dataclass(frozen=True)
class PiStructure:
    """Per-chart pairing ``even i <-> odd pairing[i]`` (0-based)."""

    pairing: dict

    def __post_init__(self):
        for cid, perm in self.pairing.items():
            if sorted(perm) != list(range(len(perm))):
                raise ModelError(f"pairing for chart {cid!r} is not a bijection", chart=cid)

    @classmethod
    def identity(cls, chart_ids, m: int) -> "PiStructure":
        return cls({c: tuple(range(m)) for c in chart_ids})

    def permutation(self, chart: str) -> tuple[int, ...]:
        return tuple(self.pairing[chart])


@dataclass(frozen=True, eq=False)
class SuperManifoldModel:
    name: str
    m: int
    n: int
    charts: tuple[Chart, ...]
    transitions: tuple[TransitionMap, ...]
    compact_body: bool = False
    pi_structure: PiStructure | None = None
    description: str = ""
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        ids = [c.id for c in self.charts]
        if len(set(ids)) != len(ids):
            raise ModelError("duplicate chart ids", charts=ids)
        for c in self.charts:
            if (c.coords.m, c.coords.n) != (self.m, self.n):
                raise ModelError(f"chart {c.id!r} has dimension {c.coords.dim}, model is {self.m}|{self.n}")
            if c.box is not None and len(c.box) != self.m:
                raise ModelError(f"chart {c.id!r} box has {len(c.box)} entries, expected {self.m}")
        known = set(ids)
        for t in self.transitions:
            if t.source not in known or t.target not in known:
                raise ModelError(f"transition {t.label} references an unknown chart")
            if (t.map.m_out, t.map.n_out) != (self.m, self.n):
                raise ModelError(f"transition {t.label} has {len(t.map.components)} components, "
                                 f"expected {self.m + self.n}")
            for o in t.overlaps:
                if o.samples.size and o.samples.shape[1] != self.m:
                    raise ModelError(f"transition {t.label}: samples must have {self.m} coordinates")
        if self.pi_structure is not None:
            if self.m != self.n:
                raise ModelError("a pi-structure needs equal even and odd dimension")
            for c in ids:
                if len(self.pi_structure.pairing.get(c, ())) != self.m:
                    raise ModelError(f"pi-structure missing or wrong size for chart {c!r}")

    @property
    def dim(self) -> str:
        return f"{self.m}|{self.n}"

    @property
    def chart_ids(self) -> list[str]:
        return [c.id for c in self.charts]

    def chart(self, cid: str) -> Chart:
        for c in self.charts:
            if c.id == cid:
                return c
        raise ModelError(f"unknown chart {cid!r}", model=self.name)

    def transitions_from(self, cid: str) -> list[TransitionMap]:
        return [t for t in self.transitions if t.source == cid]

    def transitions_between(self, a: str, b: str) -> list[TransitionMap]:
        return [t for t in self.transitions if t.source == a and t.target == b]

    def transition_at(self, a: str, b: str, x) -> TransitionMap | None:
        """The ``a -> b`` transition whose overlap contains the body point ``x``."""
        if a == b:
            return None
        for t in self.transitions_between(a, b):
            if t.covers(x):
                return t
        return None

    def map_point(self, a: str, b: str, x) -> np.ndarray | None:
        """Body coordinates of ``x`` (chart ``a``) in chart ``b``; None if not in the overlap."""
        x = np.asarray(x, dtype=float)
        if a == b:
            return x.copy()
        t = self.transition_at(a, b, x)
        if t is None:
            return None
        return t.map.body(x.reshape(-1, 1))[:, 0]
