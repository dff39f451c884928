"""Superfunction expressions: parsing, normal form, derivatives, evaluation, Jacobians.

Indices in this public API are 1-based to match coordinate names ``x1`` and
``xi1``; the node classes themselves store 0-based indices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionError, DomainError, ParityError
from ..grassmann import GrassmannElement, Parity
from .forms import OddPolynomialForm, diff_even_form, diff_odd_form, normalize as _normalize
from .nodes import (
    ONE, ZERO, Add, Const, Div, EvenVar, Expr, Func, Mul, Neg, OddVar, Pow,
    add, const, div, even_variables, func, mul, neg, odd_variables, power, substitute,
)
from .numeric import compile_many, evaluate_real, evaluate_tree, interpret
from .parser import CoordinateSystem, parse
from .predicate import TRUE, Predicate, parse_predicate
from .printer import to_string

__all__ = [
    "Expr", "CoordinateSystem", "OddPolynomialForm", "BlockJacobian", "Predicate",
    "parse", "parse_predicate", "to_string", "normalize", "diff_even", "diff_odd",
    "eval", "jacobian_blocks", "reduce_block", "substitute", "compile_many",
    "evaluate_real", "interpret",
]


def _num_odd(expr: Expr, coords: CoordinateSystem | None) -> int:
    if coords is not None:
        return coords.n
    odd = odd_variables(expr)
    return max(odd) + 1 if odd else 0


def normalize(expr: Expr, coords: CoordinateSystem | int | None = None) -> OddPolynomialForm:
    """Normal form ``sum_I c_I(x) xi^I``; ``coords`` may also be the odd count."""
    n = coords if isinstance(coords, int) else _num_odd(expr, coords)
    return _normalize(expr, n)


def diff_even(expr: Expr, i: int, coords: CoordinateSystem | None = None) -> Expr:
    """``d/dx_i`` (1-based ``i``) of a superfunction, returned in normal form."""
    if coords is not None and not 1 <= i <= coords.m:
        raise DimensionError(f"even index {i} outside 1..{coords.m}")
    if i < 1:
        raise DimensionError(f"even index {i} must be positive")
    form = normalize(expr, coords)
    return diff_even_form(form, i - 1).to_expr()


def diff_odd(expr: Expr, j: int, coords: CoordinateSystem | None = None) -> Expr:
    """Left derivative ``d/dxi_j`` (1-based ``j``), returned in normal form."""
    n = _num_odd(expr, coords)
    if j < 1 or (coords is not None and j > n):
        raise DimensionError(f"odd index {j} outside 1..{n}")
    form = normalize(expr, max(n, j))
    return diff_odd_form(form, j - 1).to_expr()


def eval(expr: Expr, even_point, odd_assignment=(), num_generators: int | None = None) -> GrassmannElement:  # noqa: A001
    """Substitute reals (or even Grassmann numbers) for ``x`` and Grassmann numbers for ``xi``.

    Real even points go through the normal form with numerically evaluated
    coefficients.  Even inputs carrying a nilpotent part are handled by direct
    interpretation over the Grassmann algebra.
    """
    odd_assignment = list(odd_assignment)
    if num_generators is None:
        gens = [v.num_generators for v in list(even_point) + odd_assignment if isinstance(v, GrassmannElement)]
        num_generators = gens[0] if gens else 0
    for k, v in enumerate(odd_assignment):
        if isinstance(v, GrassmannElement) and v.parity is Parity.EVEN and not v.is_zero():
            raise ParityError(f"odd variable xi{k + 1} assigned an even element")
    need = _num_odd(expr, None)
    if len(odd_assignment) < need:
        raise DimensionError(f"expression uses xi{need} but only {len(odd_assignment)} odd values given")
    if any(isinstance(v, GrassmannElement) and not v.soul.is_zero() for v in even_point):
        return interpret(expr, even_point, odd_assignment, num_generators)
    point = np.array([v.body if isinstance(v, GrassmannElement) else float(v) for v in even_point])
    form = _normalize(expr, len(odd_assignment))
    masks = list(form.terms)
    if not masks:
        return GrassmannElement.scalar(num_generators, 0.0)
    vals = compile_many([form.terms[m] for m in masks])(point.reshape(-1, 1) if point.size else np.zeros((0, 1)))[:, 0]
    if not np.all(np.isfinite(vals)):
        raise DomainError("coefficient not finite at the given point", point=point.tolist())
    out = GrassmannElement.scalar(num_generators, 0.0)
    odds = [v if isinstance(v, GrassmannElement) else GrassmannElement.scalar(num_generators, float(v))
            for v in odd_assignment]
    for mask, c in zip(masks, vals):
        term = GrassmannElement.scalar(num_generators, float(c))
        j = 0
        while mask:
            if mask & 1:
                term = term * odds[j]
            mask >>= 1
            j += 1
        out = out + term
    return out


@dataclass(frozen=True)
class BlockJacobian:
    """The four derivative blocks of a morphism written in target/source order.

    ``even_even[r][i] = d y_r / d x_i``, ``even_odd[r][j] = d y_r / d xi_j``,
    ``odd_even[s][i] = d eta_s / d x_i``, ``odd_odd[s][j] = d eta_s / d xi_j``.
    """

    even_even: tuple[tuple[Expr, ...], ...]
    even_odd: tuple[tuple[Expr, ...], ...]
    odd_even: tuple[tuple[Expr, ...], ...]
    odd_odd: tuple[tuple[Expr, ...], ...]

    def reduced(self, even_point) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        return tuple(reduce_block(b, even_point) for b in
                     (self.even_even, self.even_odd, self.odd_even, self.odd_odd))


def _component_forms(components, coords: CoordinateSystem, num_even_out: int):
    forms = []
    for r, e in enumerate(components):
        form = _normalize(e, coords.n)
        expected = Parity.EVEN if r < num_even_out else Parity.ODD
        if not form.is_zero() and form.parity is not expected:
            raise ParityError(f"component {r + 1} has parity {form.parity}, expected {expected}")
        if expected is Parity.ODD and 0 in form.terms:
            raise ParityError(f"component {r + 1} has a nonzero body but must be odd")
        forms.append(form)
    return forms


def jacobian_blocks(components, coords: CoordinateSystem, num_even_out: int | None = None) -> BlockJacobian:
    """Jacobian blocks of a morphism given by its target component expressions.

    The first ``num_even_out`` components are the even target coordinates
    (default: ``coords.m``, i.e. an endomorphism of the dimension).
    """
    components = list(components)
    if num_even_out is None:
        num_even_out = coords.m
    forms = _component_forms(components, coords, num_even_out)

    def block(rows, deriv, count):
        return tuple(tuple(deriv(f, i).to_expr() for i in range(count)) for f in rows)

    ev, od = forms[:num_even_out], forms[num_even_out:]
    return BlockJacobian(
        block(ev, diff_even_form, coords.m), block(ev, diff_odd_form, coords.n),
        block(od, diff_even_form, coords.m), block(od, diff_odd_form, coords.n),
    )


def reduce_block(block, even_point) -> np.ndarray:
    """Entrywise body of a block of expressions at a real point."""
    rows = [list(r) for r in block]
    if not rows or not rows[0]:
        return np.zeros((len(rows), 0))
    point = np.asarray(even_point, dtype=float).reshape(-1, 1)
    bodies = []
    for r in rows:
        for e in r:
            n = _num_odd(e, None)
            bodies.append(_normalize(e, n).body)
    vals = compile_many(bodies)(point)[:, 0]
    if not np.all(np.isfinite(vals)):
        raise DomainError("block entry not finite at the given point", point=point[:, 0].tolist())
    return vals.reshape(len(rows), len(rows[0]))
