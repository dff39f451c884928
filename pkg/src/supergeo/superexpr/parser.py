"""Parser for the superfunction and predicate grammars.

Expression grammar (EBNF)::

    expr    = term { ("+" | "-") term } ;
    term    = unary { ("*" | "/") unary } ;
    unary   = ("+" | "-") unary | power ;
    power   = atom [ ("^" | "**") int_exponent ] ;
    atom    = number | name | func "(" expr ")" | "(" expr ")" ;
    func    = "sin" | "cos" | "exp" | "log" | "sqrt" | "atan" ;
    name    = even coordinate name | odd coordinate name | "pi" | "e" ;

``int_exponent`` is an integer literal, optionally negated and/or in
parentheses.  Predicates add comparisons and boolean connectives::

    pred    = disj ;
    disj    = conj { "or" conj } ;
    conj    = neg { "and" neg } ;
    neg     = "not" neg | cmp | "(" pred ")" | "true" | "false" ;
    cmp     = expr ( "<" | "<=" | ">" | ">=" ) expr { ( "<" | "<=" | ">" | ">=" ) expr } ;

Tokenising and precedence are delegated to Python's own ``ast`` module after
``^`` is rewritten to ``**``; only the node kinds above are accepted.
"""

from __future__ import annotations

import ast
import keyword
import math
from dataclasses import dataclass

from ..errors import ParseError
from .nodes import FUNCTIONS, Const, EvenVar, Expr, OddVar, add, div, func, mul, neg, power, share

__all__ = ["CoordinateSystem", "parse", "parse_predicate_tree"]

_CONSTANTS = {"pi": math.pi, "e": math.e}


@dataclass(frozen=True)
class CoordinateSystem:
    """Names of the even and odd coordinates of an ``m|n`` superdomain."""

    even_names: tuple[str, ...]
    odd_names: tuple[str, ...]

    def __post_init__(self):
        names = list(self.even_names) + list(self.odd_names)
        if len(set(names)) != len(names):
            raise ValueError(f"coordinate names must be unique: {names}")
        for nm in names:
            if not nm.isidentifier() or keyword.iskeyword(nm) or nm in FUNCTIONS or nm in _CONSTANTS:
                raise ValueError(f"invalid coordinate name {nm!r}")

    @classmethod
    def standard(cls, m: int, n: int) -> "CoordinateSystem":
        if m < 0 or n < 0:
            raise ValueError("dimensions must be nonnegative")
        return cls(tuple(f"x{i}" for i in range(1, m + 1)),
                   tuple(f"xi{j}" for j in range(1, n + 1)))

    @property
    def m(self) -> int:
        return len(self.even_names)

    @property
    def n(self) -> int:
        return len(self.odd_names)

    @property
    def dim(self) -> str:
        return f"{self.m}|{self.n}"

    def lookup(self, name: str) -> Expr | None:
        if name in self.even_names:
            return EvenVar(self.even_names.index(name))
        if name in self.odd_names:
            return OddVar(self.odd_names.index(name))
        return None


def _prepare(text: str) -> tuple[str, list[int]]:
    """Rewrite ``^`` as ``**``; return the new text and the map back to columns."""
    out = []
    back = []
    for i, ch in enumerate(text):
        if ch == "^":
            out.append("**")
            back.extend([i, i])
        else:
            out.append(ch)
            back.append(i)
    back.append(len(text))
    return "".join(out), back


class _Converter:
    def __init__(self, text: str, coords: CoordinateSystem, back: list[int], allow_odd: bool):
        self.text = text
        self.coords = coords
        self.back = back
        self.allow_odd = allow_odd

    def fail(self, msg: str, node=None):
        pos = None
        if node is not None and getattr(node, "col_offset", None) is not None:
            col = node.col_offset
            pos = self.back[min(col, len(self.back) - 1)] + 1
        raise ParseError(f"{msg}" + (f" at column {pos}" if pos else ""), self.text, pos)

    def expr(self, node) -> Expr:
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
                self.fail(f"unsupported literal {node.value!r}", node)
            return Const(float(node.value))
        if isinstance(node, ast.Name):
            hit = self.coords.lookup(node.id)
            if hit is not None:
                if isinstance(hit, OddVar) and not self.allow_odd:
                    self.fail(f"odd coordinate {node.id!r} not allowed here", node)
                return hit
            if node.id in _CONSTANTS:
                return Const(_CONSTANTS[node.id])
            self.fail(f"unknown identifier {node.id!r}", node)
        if isinstance(node, ast.UnaryOp):
            if isinstance(node.op, ast.USub):
                return neg(self.expr(node.operand))
            if isinstance(node.op, ast.UAdd):
                return self.expr(node.operand)
            self.fail("unsupported unary operator", node)
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                return power(self.expr(node.left), self.exponent(node.right))
            left = self.expr(node.left)
            right = self.expr(node.right)
            if isinstance(node.op, ast.Add):
                return add(left, right)
            if isinstance(node.op, ast.Sub):
                return add(left, neg(right))
            if isinstance(node.op, ast.Mult):
                return mul(left, right)
            if isinstance(node.op, ast.Div):
                return div(left, right)
            self.fail("unsupported binary operator", node)
        if isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.func.id not in FUNCTIONS:
                self.fail("unknown function", node)
            if len(node.args) != 1 or node.keywords:
                self.fail(f"{node.func.id} takes exactly one argument", node)
            return func(node.func.id, self.expr(node.args[0]))
        self.fail(f"unsupported syntax ({type(node).__name__})", node)

    def exponent(self, node) -> int:
        sign = 1
        cur = node
        while isinstance(cur, ast.UnaryOp) and isinstance(cur.op, (ast.USub, ast.UAdd)):
            if isinstance(cur.op, ast.USub):
                sign = -sign
            cur = cur.operand
        if isinstance(cur, ast.Constant) and not isinstance(cur.value, bool):
            v = cur.value
            if isinstance(v, int) or (isinstance(v, float) and v.is_integer()):
                return sign * int(v)
        self.fail("non-integer exponent", node)


def _parse_tree(text: str, coords: CoordinateSystem, allow_odd: bool):
    if not isinstance(text, str):
        raise ParseError(f"expected a string, got {type(text).__name__}", str(text))
    src, back = _prepare(text)
    lead = len(src) - len(src.lstrip())
    back = back[lead:]
    try:
        tree = ast.parse(src.strip() or "None", mode="eval")
    except SyntaxError as exc:
        col = (exc.offset or 1) - 1
        pos = back[min(max(col, 0), len(back) - 1)] + 1
        raise ParseError(f"syntax error: {exc.msg} at column {pos}", text, pos) from None
    return tree.body, _Converter(text, coords, back, allow_odd)


def parse(text: str, coords: CoordinateSystem) -> Expr:
    """Parse infix text into an expression over ``coords``."""
    body, conv = _parse_tree(text, coords, allow_odd=True)
    if isinstance(body, ast.Constant) and body.value is None:
        raise ParseError("empty expression", text, 1)
    return share(conv.expr(body))


def parse_predicate_tree(text: str, coords: CoordinateSystem):
    """Return the raw ``ast`` body plus a converter; used by :mod:`predicate`."""
    return _parse_tree(text, coords, allow_odd=False)
