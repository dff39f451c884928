"""Expression tree for superfunctions.

Nodes are immutable.  Build them through the smart constructors (``add``,
``mul``, ...) or the operator overloads, which fold constants and merge like
terms; the raw classes are only used for pattern matching.  Variable indices
are 0-based; the public calculus API uses the 1-based numbering of the
coordinate names ``x1, xi1, ...``.
"""

from __future__ import annotations

import math
from numbers import Real

__all__ = [
    "Expr", "Const", "EvenVar", "OddVar", "Add", "Mul", "Div", "Pow", "Neg", "Func",
    "FUNCTIONS", "const", "add", "mul", "div", "power", "neg", "func", "as_expr",
    "ZERO", "ONE", "substitute", "odd_variables", "even_variables", "walk",
]

FUNCTIONS = ("sin", "cos", "exp", "log", "sqrt", "atan")

_MATH = {
    "sin": math.sin, "cos": math.cos, "exp": math.exp,
    "log": math.log, "sqrt": math.sqrt, "atan": math.atan,
}


class Expr:
    __slots__ = ("_hash",)

    def _key(self) -> tuple:
        raise NotImplementedError

    def children(self) -> tuple["Expr", ...]:
        return ()

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((type(self).__name__,) + self._key())
            self._hash = h
        return h

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other):
            return False
        return hash(self) == hash(other) and self._key() == other._key()

    def __ne__(self, other):
        return not self.__eq__(other)

    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return add(self, neg(as_expr(other)))

    def __rsub__(self, other):
        return add(as_expr(other), neg(self))

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __truediv__(self, other):
        return div(self, as_expr(other))

    def __rtruediv__(self, other):
        return div(as_expr(other), self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            raise TypeError("only integer exponents are supported")
        return power(self, exponent)

    def __repr__(self):
        from .printer import to_string
        return f"Expr({to_string(self)!r})"


class Const(Expr):
    __slots__ = ("value",)

    def __init__(self, value: float):
        self._hash = None
        self.value = float(value)

    def _key(self):
        return (self.value,)


class EvenVar(Expr):
    __slots__ = ("index",)

    def __init__(self, index: int):
        self._hash = None
        self.index = int(index)

    def _key(self):
        return (self.index,)


class OddVar(Expr):
    __slots__ = ("index",)

    def __init__(self, index: int):
        self._hash = None
        self.index = int(index)

    def _key(self):
        return (self.index,)


class Add(Expr):
    __slots__ = ("terms",)

    def __init__(self, terms):
        self._hash = None
        self.terms = tuple(terms)

    def _key(self):
        return self.terms

    def children(self):
        return self.terms


class Mul(Expr):
    """Ordered product; order matters once odd factors are involved."""

    __slots__ = ("factors",)

    def __init__(self, factors):
        self._hash = None
        self.factors = tuple(factors)

    def _key(self):
        return self.factors

    def children(self):
        return self.factors


class Div(Expr):
    __slots__ = ("num", "den")

    def __init__(self, num: Expr, den: Expr):
        self._hash = None
        self.num = num
        self.den = den

    def _key(self):
        return (self.num, self.den)

    def children(self):
        return (self.num, self.den)


class Pow(Expr):
    __slots__ = ("base", "exponent")

    def __init__(self, base: Expr, exponent: int):
        self._hash = None
        self.base = base
        self.exponent = int(exponent)

    def _key(self):
        return (self.base, self.exponent)

    def children(self):
        return (self.base,)


class Neg(Expr):
    __slots__ = ("arg",)

    def __init__(self, arg: Expr):
        self._hash = None
        self.arg = arg

    def _key(self):
        return (self.arg,)

    def children(self):
        return (self.arg,)


class Func(Expr):
    __slots__ = ("name", "arg")

    def __init__(self, name: str, arg: Expr):
        if name not in FUNCTIONS:
            raise ValueError(f"unknown function {name!r}")
        self._hash = None
        self.name = name
        self.arg = arg

    def _key(self):
        return (self.name, self.arg)

    def children(self):
        return (self.arg,)


ZERO = Const(0.0)
ONE = Const(1.0)


def as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, Real):
        return Const(float(value))
    raise TypeError(f"cannot convert {type(value).__name__} to an expression")


def const(value: float) -> Const:
    return Const(value)


def _split(term: Expr) -> tuple[float, Expr | None]:
    """Write a term as ``coefficient * base``; base None means a pure constant."""
    if isinstance(term, Const):
        return term.value, None
    if isinstance(term, Neg):
        c, base = _split(term.arg)
        return -c, base
    if isinstance(term, Mul) and isinstance(term.factors[0], Const):
        rest = term.factors[1:]
        base = rest[0] if len(rest) == 1 else Mul(rest)
        return term.factors[0].value, base
    return 1.0, term


def _scaled(c: float, base: Expr) -> Expr:
    if c == 1.0:
        return base
    if c == -1.0:
        return Neg(base)
    if isinstance(base, Mul):
        return Mul((Const(c),) + base.factors)
    return Mul((Const(c), base))


def add(*terms: Expr) -> Expr:
    flat: list[Expr] = []
    for t in terms:
        if isinstance(t, Add):
            flat.extend(t.terms)
        else:
            flat.append(t)
    constant = 0.0
    bases: dict[Expr, float] = {}
    for t in flat:
        c, base = _split(t)
        if base is None:
            constant += c
        else:
            bases[base] = bases.get(base, 0.0) + c
    out = [_scaled(c, b) for b, c in bases.items() if c != 0.0]
    if constant != 0.0:
        out.insert(0, Const(constant))
    if not out:
        return ZERO
    if len(out) == 1:
        return out[0]
    return Add(out)


def mul(*factors: Expr) -> Expr:
    flat: list[Expr] = []
    coeff = 1.0
    stack = list(factors)
    stack.reverse()
    while stack:
        f = stack.pop()
        if isinstance(f, Mul):
            stack.extend(reversed(f.factors))
        elif isinstance(f, Neg):
            coeff = -coeff
            stack.append(f.arg)
        elif isinstance(f, Const):
            coeff *= f.value
        else:
            flat.append(f)
    if coeff == 0.0:
        return ZERO
    if not flat:
        return Const(coeff)
    body = flat[0] if len(flat) == 1 else Mul(flat)
    return _scaled(coeff, body)


def neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    if isinstance(a, Mul) and isinstance(a.factors[0], Const):
        c, base = _split(a)
        return _scaled(-c, base)
    return Neg(a)


def div(a: Expr, b: Expr) -> Expr:
    if isinstance(b, Const) and b.value != 0.0:
        return mul(Const(1.0 / b.value), a)
    if isinstance(a, Const) and a.value == 0.0:
        return ZERO
    if isinstance(b, Neg):
        return neg(div(a, b.arg))
    if isinstance(a, Neg):
        return neg(div(a.arg, b))
    return Div(a, b)


def power(base: Expr, exponent: int) -> Expr:
    exponent = int(exponent)
    if exponent == 0:
        return ONE
    if exponent == 1:
        return base
    if isinstance(base, Const):
        if base.value == 0.0 and exponent < 0:
            return Pow(base, exponent)
        return Const(base.value ** exponent)
    if isinstance(base, Pow):
        return power(base.base, base.exponent * exponent)
    return Pow(base, exponent)


def func(name: str, arg: Expr) -> Expr:
    if isinstance(arg, Const):
        try:
            return Const(_MATH[name](arg.value))
        except (ValueError, OverflowError):
            pass
    return Func(name, arg)


def walk(expr: Expr):
    """Pre-order traversal without recursion (trees can be deep)."""
    stack = [expr]
    seen = set()
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        yield node
        stack.extend(node.children())


def odd_variables(expr: Expr) -> set[int]:
    return {n.index for n in walk(expr) if isinstance(n, OddVar)}


def even_variables(expr: Expr) -> set[int]:
    return {n.index for n in walk(expr) if isinstance(n, EvenVar)}


def share(expr: Expr) -> Expr:
    """Rebuild ``expr`` so equal subtrees are one object.

    Walkers memoize by node identity, so a tree with repeated subtrees (as
    parsed from long text) is otherwise re-evaluated once per copy.
    """
    pool: dict[Expr, Expr] = {}
    done: dict[int, Expr] = {}

    def rec(node: Expr) -> Expr:
        hit = done.get(id(node))
        if hit is not None:
            return hit
        if isinstance(node, (Add, Mul)):
            parts = [rec(c) for c in node.children()]
            fresh = type(node)(parts)
        elif isinstance(node, Div):
            fresh = Div(rec(node.num), rec(node.den))
        elif isinstance(node, Pow):
            fresh = Pow(rec(node.base), node.exponent)
        elif isinstance(node, Neg):
            fresh = Neg(rec(node.arg))
        elif isinstance(node, Func):
            fresh = Func(node.name, rec(node.arg))
        else:
            fresh = node
        out = pool.setdefault(fresh, fresh)
        done[id(node)] = out
        return out

    return rec(expr)


def substitute(expr: Expr, even: dict | None = None, odd: dict | None = None) -> Expr:
    """Replace variables by expressions, rebuilding through the smart constructors."""
    even = even or {}
    odd = odd or {}
    memo: dict[int, Expr] = {}

    def rec(node: Expr) -> Expr:
        hit = memo.get(id(node))
        if hit is not None:
            return hit
        if isinstance(node, EvenVar):
            out = even.get(node.index, node)
        elif isinstance(node, OddVar):
            out = odd.get(node.index, node)
        elif isinstance(node, Const):
            out = node
        elif isinstance(node, Add):
            out = add(*[rec(t) for t in node.terms])
        elif isinstance(node, Mul):
            out = mul(*[rec(f) for f in node.factors])
        elif isinstance(node, Div):
            out = div(rec(node.num), rec(node.den))
        elif isinstance(node, Pow):
            out = power(rec(node.base), node.exponent)
        elif isinstance(node, Neg):
            out = neg(rec(node.arg))
        elif isinstance(node, Func):
            out = func(node.name, rec(node.arg))
        else:
            raise TypeError(f"unexpected node {type(node).__name__}")
        memo[id(node)] = out
        return out

    return rec(expr)
