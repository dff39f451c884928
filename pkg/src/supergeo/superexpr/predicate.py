"""Body-domain predicates: comparisons of even expressions joined by and/or/not."""

from __future__ import annotations

import ast
from dataclasses import dataclass

import numpy as np

from .nodes import Expr, substitute
from .numeric import compile_many
from .parser import CoordinateSystem, parse_predicate_tree
from .printer import to_string

__all__ = ["Predicate", "PTrue", "Compare", "And", "Or", "Not", "parse_predicate", "TRUE"]

_OPS = {ast.Lt: "<", ast.LtE: "<=", ast.Gt: ">", ast.GtE: ">="}
_NP_OPS = {"<": np.less, "<=": np.less_equal, ">": np.greater, ">=": np.greater_equal}


class Predicate:
    def evaluate(self, x) -> np.ndarray:
        """Boolean array of shape ``x.shape[1:]``; non-finite comparisons are False."""
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(self._eval(x), x.shape[1:]).copy()

    def __call__(self, point) -> bool:
        return bool(self.evaluate(np.asarray(point, dtype=float))[()])

    def to_string(self, coords: CoordinateSystem | None = None) -> str:
        return self._str(coords, 0)

    def __and__(self, other: "Predicate") -> "Predicate":
        return conjoin(self, other)


@dataclass(frozen=True)
class PTrue(Predicate):
    def _eval(self, x):
        return np.ones(x.shape[1:], dtype=bool)

    def substitute(self, even):
        return self

    def _str(self, coords, prec):
        return "true"


TRUE = PTrue()


@dataclass(frozen=True)
class Compare(Predicate):
    exprs: tuple[Expr, ...]
    ops: tuple[str, ...]

    def _eval(self, x):
        vals = compile_many(self.exprs)(x)
        out = np.ones(x.shape[1:], dtype=bool)
        with np.errstate(invalid="ignore"):
            for i, op in enumerate(self.ops):
                out &= _NP_OPS[op](vals[i], vals[i + 1])
        return out & np.all(np.isfinite(vals), axis=0)

    def substitute(self, even):
        return Compare(tuple(substitute(e, even=even) for e in self.exprs), self.ops)

    def _str(self, coords, prec):
        parts = [to_string(self.exprs[0], coords)]
        for op, e in zip(self.ops, self.exprs[1:]):
            parts += [op, to_string(e, coords)]
        return " ".join(parts)


@dataclass(frozen=True)
class And(Predicate):
    parts: tuple[Predicate, ...]

    def _eval(self, x):
        out = np.ones(x.shape[1:], dtype=bool)
        for p in self.parts:
            out = out & p._eval(x)
        return out

    def substitute(self, even):
        return And(tuple(p.substitute(even) for p in self.parts))

    def _str(self, coords, prec):
        s = " and ".join(p._str(coords, 2) for p in self.parts)
        return f"({s})" if prec > 2 else s


@dataclass(frozen=True)
class Or(Predicate):
    parts: tuple[Predicate, ...]

    def _eval(self, x):
        out = np.zeros(x.shape[1:], dtype=bool)
        for p in self.parts:
            out = out | p._eval(x)
        return out

    def substitute(self, even):
        return Or(tuple(p.substitute(even) for p in self.parts))

    def _str(self, coords, prec):
        s = " or ".join(p._str(coords, 1) for p in self.parts)
        return f"({s})" if prec > 1 else s


@dataclass(frozen=True)
class Not(Predicate):
    arg: Predicate

    def _eval(self, x):
        return ~self.arg._eval(x)

    def substitute(self, even):
        return Not(self.arg.substitute(even))

    def _str(self, coords, prec):
        return "not " + self.arg._str(coords, 3)


def conjoin(*preds: Predicate) -> Predicate:
    parts = []
    for p in preds:
        if isinstance(p, PTrue):
            continue
        parts.extend(p.parts if isinstance(p, And) else [p])
    if not parts:
        return TRUE
    return parts[0] if len(parts) == 1 else And(tuple(parts))


def parse_predicate(text: str, coords: CoordinateSystem) -> Predicate:
    """Parse a domain predicate such as ``"-pi < x1 < pi and x2^2 < 4"``."""
    body, conv = parse_predicate_tree(text, coords)
    if isinstance(body, ast.Constant) and body.value is None:
        return TRUE

    def rec(node) -> Predicate:
        if isinstance(node, ast.Name) and node.id in ("true", "false"):
            return TRUE if node.id == "true" else Not(TRUE)
        if isinstance(node, ast.Constant) and isinstance(node.value, bool):
            return TRUE if node.value else Not(TRUE)
        if isinstance(node, ast.BoolOp):
            parts = tuple(rec(v) for v in node.values)
            return And(parts) if isinstance(node.op, ast.And) else Or(parts)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.Not):
            return Not(rec(node.operand))
        if isinstance(node, ast.Compare):
            ops = []
            for op in node.ops:
                if type(op) not in _OPS:
                    conv.fail("only <, <=, >, >= comparisons are allowed", node)
                ops.append(_OPS[type(op)])
            exprs = (conv.expr(node.left),) + tuple(conv.expr(c) for c in node.comparators)
            return Compare(exprs, tuple(ops))
        conv.fail("expected a comparison or boolean combination", node)

    return rec(body)
