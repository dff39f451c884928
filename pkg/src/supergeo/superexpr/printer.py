"""Render expressions back into the parseable infix grammar."""

from __future__ import annotations

from .nodes import Add, Const, Div, EvenVar, Expr, Func, Mul, Neg, OddVar, Pow

_PREC_ADD = 1
_PREC_MUL = 2
_PREC_UNARY = 3
_PREC_POW = 4
_PREC_ATOM = 5


def _fmt_const(v: float) -> str:
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def to_string(expr: Expr, coords=None) -> str:
    """Infix text that :func:`parse` maps back to an equal-valued expression."""
    if coords is None:
        even = lambda i: f"x{i + 1}"      # noqa: E731
        odd = lambda i: f"xi{i + 1}"      # noqa: E731
    else:
        even = lambda i: coords.even_names[i]   # noqa: E731
        odd = lambda i: coords.odd_names[i]     # noqa: E731

    def rec(node: Expr) -> tuple[str, int]:
        if isinstance(node, Const):
            s = _fmt_const(node.value)
            return s, (_PREC_UNARY if node.value < 0 else _PREC_ATOM)
        if isinstance(node, EvenVar):
            return even(node.index), _PREC_ATOM
        if isinstance(node, OddVar):
            return odd(node.index), _PREC_ATOM
        if isinstance(node, Func):
            return f"{node.name}({rec(node.arg)[0]})", _PREC_ATOM
        if isinstance(node, Neg):
            s, p = rec(node.arg)
            return "-" + (s if p > _PREC_UNARY else f"({s})"), _PREC_UNARY
        if isinstance(node, Pow):
            s, p = rec(node.base)
            base = s if p == _PREC_ATOM else f"({s})"
            e = node.exponent
            return f"{base}^{e}" if e >= 0 else f"{base}^({e})", _PREC_POW
        if isinstance(node, Mul):
            parts = []
            for f in node.factors:
                s, p = rec(f)
                parts.append(s if p > _PREC_MUL else f"({s})")
            return "*".join(parts), _PREC_MUL
        if isinstance(node, Div):
            sn, pn = rec(node.num)
            sd, pd = rec(node.den)
            num = sn if pn >= _PREC_MUL else f"({sn})"
            den = sd if pd > _PREC_MUL else f"({sd})"
            return f"{num}/{den}", _PREC_MUL
        if isinstance(node, Add):
            out = ""
            for i, t in enumerate(node.terms):
                if isinstance(t, Neg) and i > 0:
                    s, p = rec(t.arg)
                    out += " - " + (s if p > _PREC_ADD else f"({s})")
                else:
                    s, p = rec(t)
                    if i > 0:
                        out += " + "
                    out += s if (p > _PREC_ADD or i == 0) else f"({s})"
            return out, _PREC_ADD
        raise TypeError(f"unexpected node {type(node).__name__}")

    return rec(expr)[0]
