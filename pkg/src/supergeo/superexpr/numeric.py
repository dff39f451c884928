"""Numeric evaluation: vectorised real evaluation and Grassmann-valued interpretation."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..errors import DomainError
from ..grassmann import GrassmannElement
from .nodes import Add, Const, Div, EvenVar, Expr, Func, Mul, Neg, OddVar, Pow

_NP = {"sin": "np.sin", "cos": "np.cos", "exp": "np.exp",
       "log": "np.log", "sqrt": "np.sqrt", "atan": "np.arctan"}
_NP_FUNCS = {"sin": np.sin, "cos": np.cos, "exp": np.exp,
             "log": np.log, "sqrt": np.sqrt, "atan": np.arctan}


def _codegen(exprs: tuple[Expr, ...]) -> str:
    """Straight-line code with one temporary per distinct subexpression."""
    names: dict[Expr, str] = {}
    lines: list[str] = []

    def emit(node: Expr) -> str:
        # iterative post-order so deep trees do not hit the recursion limit
        stack = [(node, False)]
        while stack:
            cur, ready = stack.pop()
            if cur in names:
                continue
            if not ready:
                stack.append((cur, True))
                for ch in cur.children():
                    if ch not in names:
                        stack.append((ch, False))
                continue
            if isinstance(cur, Const):
                code = repr(cur.value)
            elif isinstance(cur, EvenVar):
                code = f"x[{cur.index}]"
            elif isinstance(cur, OddVar):
                raise TypeError("numeric evaluation needs coefficient expressions without odd variables")
            elif isinstance(cur, Add):
                code = " + ".join(names[t] for t in cur.terms)
            elif isinstance(cur, Mul):
                code = " * ".join(names[f] for f in cur.factors)
            elif isinstance(cur, Div):
                code = f"{names[cur.num]} / {names[cur.den]}"
            elif isinstance(cur, Pow):
                code = f"{names[cur.base]} ** {cur.exponent}"
            elif isinstance(cur, Neg):
                code = f"-{names[cur.arg]}"
            elif isinstance(cur, Func):
                code = f"{_NP[cur.name]}({names[cur.arg]})"
            else:
                raise TypeError(f"unexpected node {type(cur).__name__}")
            name = f"t{len(names)}"
            names[cur] = name
            lines.append(f"    {name} = {code}")
        return names[node]

    outs = [emit(e) for e in exprs]
    body = "\n".join(lines)
    return f"def _f(x):\n{body}\n    return ({', '.join(outs)},)\n"


@lru_cache(maxsize=4096)
def _compiled(exprs: tuple[Expr, ...]):
    src = _codegen(exprs)
    namespace = {"np": np}
    exec(compile(src, "<superexpr>", "exec"), namespace)
    return namespace["_f"]


def compile_many(exprs) -> "callable":
    """Vectorised evaluator for several coefficient expressions sharing subterms.

    The returned function takes ``x`` of shape ``(m, ...)`` and returns an array of
    shape ``(len(exprs), ...)``.  Non-finite values are returned as is; callers
    decide whether that is an error.
    """
    exprs = tuple(exprs)
    raw = _compiled(exprs)

    def f(x):
        x = np.asarray(x, dtype=float)
        shape = x.shape[1:]
        with np.errstate(all="ignore"):
            try:
                vals = raw(x)
            except ZeroDivisionError:
                vals = [np.inf] * len(exprs)
        out = np.empty((len(exprs),) + shape)
        for i, v in enumerate(vals):
            out[i] = v
        return out

    return f


def compile_scalar(expr: Expr):
    f = compile_many((expr,))
    return lambda x: f(x)[0]


def evaluate_real(expr: Expr, point) -> float:
    """Evaluate a coefficient expression at one real point, raising on domain errors."""
    val = float(compile_many((expr,))(np.asarray(point, dtype=float))[0])
    if not np.isfinite(val):
        raise DomainError("expression is not finite at the given point", point=list(map(float, point)))
    return val


def evaluate_tree(expr: Expr, x) -> np.ndarray:
    """Plain recursive tree walk; kept independent of the code generator."""
    x = np.asarray(x, dtype=float)

    def rec(node):
        if isinstance(node, Const):
            return node.value
        if isinstance(node, EvenVar):
            return x[node.index]
        if isinstance(node, Add):
            out = 0.0
            for t in node.terms:
                out = out + rec(t)
            return out
        if isinstance(node, Mul):
            out = 1.0
            for f in node.factors:
                out = out * rec(f)
            return out
        if isinstance(node, Div):
            return rec(node.num) / rec(node.den)
        if isinstance(node, Pow):
            return rec(node.base) ** node.exponent
        if isinstance(node, Neg):
            return -rec(node.arg)
        if isinstance(node, Func):
            return _NP_FUNCS[node.name](rec(node.arg))
        raise TypeError(f"cannot evaluate {type(node).__name__} numerically")

    with np.errstate(all="ignore"):
        return np.broadcast_to(rec(expr), x.shape[1:]).copy()


def interpret(expr: Expr, even_values, odd_values, num_generators: int) -> GrassmannElement:
    """Evaluate an expression directly over Grassmann numbers.

    ``even_values`` may be reals or even Grassmann elements (with nilpotent
    parts); ``odd_values`` are Grassmann elements.  No normal form is built.
    """
    n = num_generators

    def lift(v):
        if isinstance(v, GrassmannElement):
            return v
        return GrassmannElement.scalar(n, float(v))

    evens = [lift(v) for v in even_values]
    odds = [lift(v) for v in odd_values]
    memo: dict[int, GrassmannElement] = {}

    def rec(node):
        hit = memo.get(id(node))
        if hit is not None:
            return hit
        if isinstance(node, Const):
            out = GrassmannElement.scalar(n, node.value)
        elif isinstance(node, EvenVar):
            out = evens[node.index]
        elif isinstance(node, OddVar):
            out = odds[node.index]
        elif isinstance(node, Add):
            out = rec(node.terms[0])
            for t in node.terms[1:]:
                out = out + rec(t)
        elif isinstance(node, Mul):
            out = rec(node.factors[0])
            for f in node.factors[1:]:
                out = out * rec(f)
        elif isinstance(node, Div):
            den = rec(node.den)
            if den.body == 0.0:
                raise DomainError("division by an element with zero body")
            out = rec(node.num) / den
        elif isinstance(node, Pow):
            base = rec(node.base)
            if node.exponent < 0 and base.body == 0.0:
                raise DomainError("negative power of an element with zero body")
            out = base ** node.exponent
        elif isinstance(node, Neg):
            out = -rec(node.arg)
        elif isinstance(node, Func):
            out = rec(node.arg).apply(node.name)
        else:
            raise TypeError(f"unexpected node {type(node).__name__}")
        memo[id(node)] = out
        return out

    result = rec(expr)
    if not np.all(np.isfinite(result.coeffs)):
        raise DomainError("expression is not finite at the given point")
    return result
