"""A coordinate formula ``(x; xi) -> (y; eta)`` with cached normal forms and evaluators."""

from __future__ import annotations

from functools import cached_property

import numpy as np

from ..grassmann import GrassmannElement, Parity
from ..superexpr import CoordinateSystem, Expr, parse, to_string
from ..superexpr.calculus import scalar_diff
from ..superexpr.forms import normalize
from ..superexpr.nodes import ZERO, EvenVar, OddVar, substitute
from ..superexpr.numeric import compile_many, interpret


class SuperMap:
    """Target components as expressions in the source coordinates.

    The first ``m_out`` components are even, the remaining ``n_out`` odd.
    Numeric helpers are vectorised over trailing axes of ``x``.
    """

    def __init__(self, coords: CoordinateSystem, components, m_out: int):
        self.coords = coords
        self.components: tuple[Expr, ...] = tuple(components)
        self.m_out = m_out
        self.n_out = len(self.components) - m_out
        if self.n_out < 0:
            raise ValueError("fewer components than even outputs")

    @classmethod
    def from_strings(cls, coords: CoordinateSystem, texts, m_out: int) -> "SuperMap":
        return cls(coords, [parse(t, coords) for t in texts], m_out)

    @classmethod
    def identity(cls, coords: CoordinateSystem) -> "SuperMap":
        comps = [EvenVar(i) for i in range(coords.m)] + [OddVar(j) for j in range(coords.n)]
        return cls(coords, comps, coords.m)

    @property
    def m(self) -> int:
        return self.coords.m

    @property
    def n(self) -> int:
        return self.coords.n

    def texts(self) -> list[str]:
        return [to_string(e, self.coords) for e in self.components]

    @cached_property
    def forms(self):
        return [normalize(e, self.n) for e in self.components]

    @cached_property
    def parity_issues(self) -> list[str]:
        issues = []
        for r, f in enumerate(self.forms):
            if f.is_zero():
                continue
            want = Parity.EVEN if r < self.m_out else Parity.ODD
            if f.parity is not want or (want is Parity.ODD and 0 in f.terms):
                issues.append(f"component {r + 1} has parity {f.parity}, expected {want}")
        return issues

    @cached_property
    def body_exprs(self) -> list[Expr]:
        return [f.body for f in self.forms[: self.m_out]]

    @cached_property
    def _body_fn(self):
        return compile_many(self.body_exprs)

    @cached_property
    def _even_fn(self):
        entries = [scalar_diff(b, i) for b in self.body_exprs for i in range(self.m)]
        return compile_many(entries)

    @cached_property
    def _odd_fn(self):
        entries = [f.terms.get(1 << k, ZERO) for f in self.forms[self.m_out:] for k in range(self.n)]
        return compile_many(entries)

    def body(self, x) -> np.ndarray:
        """Body map; ``x`` has shape ``(m, ...)``, result ``(m_out, ...)``."""
        x = np.asarray(x, dtype=float)
        if self.m_out == 0:
            return np.zeros((0,) + x.shape[1:])
        return self._body_fn(x)

    def even_block(self, x) -> np.ndarray:
        """Reduced ``dy/dx``, shape ``(m_out, m, ...)``."""
        x = np.asarray(x, dtype=float)
        if self.m_out * self.m == 0:
            return np.zeros((self.m_out, self.m) + x.shape[1:])
        return self._even_fn(x).reshape((self.m_out, self.m) + x.shape[1:])

    def odd_block(self, x) -> np.ndarray:
        """Reduced ``deta/dxi``: coefficient of ``xi_k`` in ``eta_s``, shape ``(n_out, n, ...)``."""
        x = np.asarray(x, dtype=float)
        if self.n_out * self.n == 0:
            return np.zeros((self.n_out, self.n) + x.shape[1:])
        return self._odd_fn(x).reshape((self.n_out, self.n) + x.shape[1:])

    def apply(self, evens, odds, num_generators: int) -> tuple[list[GrassmannElement], list[GrassmannElement]]:
        """Evaluate every component over the Grassmann algebra."""
        outs = [interpret(e, evens, odds, num_generators) for e in self.components]
        return outs[: self.m_out], outs[self.m_out:]

    def after(self, inner: "SuperMap") -> "SuperMap":
        """Composition ``self o inner`` by substitution."""
        if inner.m_out != self.m or inner.n_out != self.n:
            raise ValueError("dimension mismatch in composition")
        ev = {i: inner.components[i] for i in range(self.m)}
        od = {j: inner.components[inner.m_out + j] for j in range(self.n)}
        comps = [substitute(e, even=ev, odd=od) for e in self.components]
        return SuperMap(inner.coords, comps, self.m_out)

    def substitute_even(self, values: dict, coords: CoordinateSystem) -> "SuperMap":
        """Replace some even source variables (e.g. freeze a homotopy parameter)."""
        return SuperMap(coords, [substitute(e, even=values) for e in self.components], self.m_out)

    def __repr__(self):
        return f"SuperMap({self.texts()})"
