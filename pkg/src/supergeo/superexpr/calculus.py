"""Symbolic differentiation of coefficient expressions (even variables only)."""

from __future__ import annotations

from .nodes import (
    ONE, ZERO, Add, Const, Div, EvenVar, Expr, Func, Mul, Neg, OddVar, Pow,
    add, div, func, mul, neg, power, substitute,
)

# placeholder variable used to build derivatives of the elementary functions
_SLOT = -1


def function_derivative(name: str, arg: Expr) -> Expr:
    """``f'(arg)`` for the supported elementary functions."""
    if name == "sin":
        return func("cos", arg)
    if name == "cos":
        return neg(func("sin", arg))
    if name == "exp":
        return func("exp", arg)
    if name == "log":
        return div(ONE, arg)
    if name == "sqrt":
        return div(Const(0.5), func("sqrt", arg))
    if name == "atan":
        return div(ONE, add(ONE, power(arg, 2)))
    raise ValueError(f"unknown function {name!r}")


def scalar_diff(expr: Expr, index: int) -> Expr:
    """Partial derivative with respect to the even variable with 0-based ``index``."""
    memo: dict[int, Expr] = {}

    def rec(node: Expr) -> Expr:
        hit = memo.get(id(node))
        if hit is not None:
            return hit
        if isinstance(node, Const):
            out = ZERO
        elif isinstance(node, EvenVar):
            out = ONE if node.index == index else ZERO
        elif isinstance(node, OddVar):
            raise TypeError("scalar_diff expects an expression without odd variables")
        elif isinstance(node, Add):
            out = add(*[rec(t) for t in node.terms])
        elif isinstance(node, Mul):
            parts = []
            fs = node.factors
            for i, f in enumerate(fs):
                d = rec(f)
                if d == ZERO:
                    continue
                parts.append(mul(*fs[:i], d, *fs[i + 1:]))
            out = add(*parts) if parts else ZERO
        elif isinstance(node, Div):
            dn = rec(node.num)
            dd = rec(node.den)
            first = div(dn, node.den)
            if dd == ZERO:
                out = first
            else:
                out = add(first, neg(div(mul(node.num, dd), power(node.den, 2))))
        elif isinstance(node, Pow):
            db = rec(node.base)
            out = mul(Const(node.exponent), power(node.base, node.exponent - 1), db)
        elif isinstance(node, Neg):
            out = neg(rec(node.arg))
        elif isinstance(node, Func):
            da = rec(node.arg)
            out = ZERO if da == ZERO else mul(function_derivative(node.name, node.arg), da)
        else:
            raise TypeError(f"unexpected node {type(node).__name__}")
        memo[id(node)] = out
        return out

    return rec(expr)


def function_taylor_coefficients(name: str, arg: Expr, order: int) -> list[Expr]:
    """``[f(arg), f'(arg), ..., f^(order)(arg)]`` as expressions."""
    slot = EvenVar(_SLOT)
    g = Func(name, slot)
    out = [g]
    for _ in range(order):
        g = scalar_diff(g, _SLOT)
        out.append(g)
    return [substitute(d, even={_SLOT: arg}) for d in out]
