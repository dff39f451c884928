"""Normal form ``sum_I c_I(x) xi^I`` of a superfunction.

Coefficients ``c_I`` are expressions in the even variables only; keys are odd
bitmasks (bit ``j`` is the 0-based odd variable ``j``).
"""

from __future__ import annotations

import math

from ..errors import DimensionError, NotInvertibleError, ParityError
from ..grassmann import Parity, monomial_sign
from .calculus import function_taylor_coefficients, scalar_diff
from .nodes import (
    ONE, ZERO, Add, Const, Div, EvenVar, Expr, Func, Mul, Neg, OddVar, Pow,
    add, const, div, mul, neg, power,
)

__all__ = ["OddPolynomialForm", "normalize", "diff_even_form", "diff_odd_form"]


def _bits(mask: int) -> list[int]:
    out = []
    j = 0
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return out


class OddPolynomialForm:
    """Immutable map ``odd mask -> coefficient expression``."""

    __slots__ = ("num_odd", "terms")

    def __init__(self, num_odd: int, terms: dict[int, Expr] | None = None):
        self.num_odd = num_odd
        clean = {}
        for m, c in (terms or {}).items():
            if m >> num_odd:
                raise DimensionError(f"odd mask {m:b} exceeds {num_odd} odd variables")
            if not (isinstance(c, Const) and c.value == 0.0):
                clean[m] = c
        self.terms = clean

    @classmethod
    def constant(cls, num_odd: int, c: Expr) -> "OddPolynomialForm":
        return cls(num_odd, {0: c})

    @property
    def body(self) -> Expr:
        return self.terms.get(0, ZERO)

    def nilpotent_part(self) -> "OddPolynomialForm":
        return OddPolynomialForm(self.num_odd, {m: c for m, c in self.terms.items() if m})

    def coefficient(self, *odd_indices: int) -> Expr:
        """Coefficient of ``xi_{j1} ... xi_{jk}`` (0-based indices, any order)."""
        mask = 0
        sign = 1
        for j in odd_indices:
            s = monomial_sign(mask, 1 << j)
            if s == 0:
                return ZERO
            sign *= s
            mask |= 1 << j
        c = self.terms.get(mask, ZERO)
        return c if sign == 1 else neg(c)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def parity(self) -> Parity:
        degs = {bin(m).count("1") % 2 for m in self.terms}
        if degs <= {0}:
            return Parity.EVEN
        if degs == {1}:
            return Parity.ODD
        return Parity.MIXED

    def _check(self, other: "OddPolynomialForm"):
        if self.num_odd != other.num_odd:
            raise DimensionError("forms over different odd coordinate counts")

    def __add__(self, other: "OddPolynomialForm") -> "OddPolynomialForm":
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = add(out[m], c) if m in out else c
        return OddPolynomialForm(self.num_odd, out)

    def __neg__(self) -> "OddPolynomialForm":
        return OddPolynomialForm(self.num_odd, {m: neg(c) for m, c in self.terms.items()})

    def __sub__(self, other: "OddPolynomialForm") -> "OddPolynomialForm":
        return self + (-other)

    def __mul__(self, other: "OddPolynomialForm") -> "OddPolynomialForm":
        self._check(other)
        acc: dict[int, list[Expr]] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                s = monomial_sign(ma, mb)
                if s == 0:
                    continue
                acc.setdefault(ma | mb, []).append(mul(const(s), ca, cb) if s < 0 else mul(ca, cb))
        return OddPolynomialForm(self.num_odd, {m: add(*cs) for m, cs in acc.items()})

    def scale(self, c: Expr) -> "OddPolynomialForm":
        return OddPolynomialForm(self.num_odd, {m: mul(c, v) for m, v in self.terms.items()})

    def map_coefficients(self, fn) -> "OddPolynomialForm":
        return OddPolynomialForm(self.num_odd, {m: fn(c) for m, c in self.terms.items()})

    def power(self, n: int) -> "OddPolynomialForm":
        base = self if n >= 0 else self.inverse()
        result = OddPolynomialForm.constant(self.num_odd, ONE)
        n = abs(n)
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse(self) -> "OddPolynomialForm":
        """Finite Neumann series ``sum_p (-N)^p / c0^(p+1)``, with ``c0`` the even body."""
        c0 = self.body
        if isinstance(c0, Const) and c0.value == 0.0:
            raise NotInvertibleError("division by an expression whose even body part is identically zero")
        nil = self.nilpotent_part()
        result = OddPolynomialForm.constant(self.num_odd, div(ONE, c0))
        term = OddPolynomialForm.constant(self.num_odd, ONE)
        p = 0
        while True:
            term = term * nil
            p += 1
            if term.is_zero():
                break
            sign = -1.0 if p % 2 else 1.0
            result = result + term.scale(div(const(sign), power(c0, p + 1)))
        return result

    def apply(self, name: str) -> "OddPolynomialForm":
        """``f(c0 + N) = sum_p f^(p)(c0) N^p / p!``."""
        nil = self.nilpotent_part()
        powers = [OddPolynomialForm.constant(self.num_odd, ONE)]
        while True:
            nxt = powers[-1] * nil
            if nxt.is_zero():
                break
            powers.append(nxt)
        coeffs = function_taylor_coefficients(name, self.body, len(powers) - 1)
        out = OddPolynomialForm(self.num_odd)
        for p, (npow, c) in enumerate(zip(powers, coeffs)):
            out = out + npow.scale(mul(const(1.0 / math.factorial(p)), c) if p > 1 else c)
        return out

    def to_expr(self) -> Expr:
        parts = []
        for m in sorted(self.terms, key=lambda k: (bin(k).count("1"), k)):
            c = self.terms[m]
            parts.append(mul(c, *[OddVar(j) for j in _bits(m)]))
        return add(*parts) if parts else ZERO

    def __repr__(self):
        from .printer import to_string
        inner = ", ".join(f"{_bits(m)}: {to_string(c)}" for m, c in self.terms.items())
        return f"OddPolynomialForm(n={self.num_odd}, {{{inner}}})"


def normalize(expr: Expr, num_odd: int) -> OddPolynomialForm:
    """Expand an expression into its unique odd-polynomial normal form."""
    memo: dict[int, OddPolynomialForm] = {}

    def rec(node: Expr) -> OddPolynomialForm:
        hit = memo.get(id(node))
        if hit is not None:
            return hit
        if isinstance(node, (Const, EvenVar)):
            out = OddPolynomialForm.constant(num_odd, node)
        elif isinstance(node, OddVar):
            if not 0 <= node.index < num_odd:
                raise DimensionError(f"odd variable index {node.index + 1} outside 1..{num_odd}")
            out = OddPolynomialForm(num_odd, {1 << node.index: ONE})
        elif isinstance(node, Add):
            out = OddPolynomialForm(num_odd)
            for t in node.terms:
                out = out + rec(t)
        elif isinstance(node, Mul):
            out = rec(node.factors[0])
            for f in node.factors[1:]:
                out = out * rec(f)
        elif isinstance(node, Neg):
            out = -rec(node.arg)
        elif isinstance(node, Div):
            out = rec(node.num) * rec(node.den).inverse()
        elif isinstance(node, Pow):
            out = rec(node.base).power(node.exponent)
        elif isinstance(node, Func):
            out = rec(node.arg).apply(node.name)
        else:
            raise TypeError(f"unexpected node {type(node).__name__}")
        memo[id(node)] = out
        return out

    return rec(expr)


def diff_even_form(form: OddPolynomialForm, index: int) -> OddPolynomialForm:
    """Derivative along the even variable with 0-based ``index``."""
    return form.map_coefficients(lambda c: scalar_diff(c, index))


def diff_odd_form(form: OddPolynomialForm, index: int) -> OddPolynomialForm:
    """Left derivative along the odd variable with 0-based ``index``.

    ``d/dxi_j (xi^I) = (-1)^k xi^(I minus j)`` with ``k`` the number of members
    of ``I`` smaller than ``j``.
    """
    if not 0 <= index < form.num_odd:
        raise DimensionError(f"odd index {index + 1} outside 1..{form.num_odd}")
    bit = 1 << index
    out = {}
    for m, c in form.terms.items():
        if not m & bit:
            continue
        k = bin(m & (bit - 1)).count("1")
        out[m ^ bit] = neg(c) if k % 2 else c
    return OddPolynomialForm(form.num_odd, out)


def require_parity(form: OddPolynomialForm, expected: Parity, what: str = "component"):
    got = form.parity
    if form.is_zero() or got is expected:
        return
    raise ParityError(f"{what} has parity {got}, expected {expected}")
