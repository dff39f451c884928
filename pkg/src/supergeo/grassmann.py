"""Real Grassmann (exterior) algebra on a fixed number of odd generators.

Elements are stored densely: ``coeffs[mask]`` is the coefficient of the
monomial whose generator set is the bitmask ``mask`` (bit ``i - 1`` set means
generator ``i`` is present), multiplied in increasing index order.  The dense
array is an implementation detail; :attr:`GrassmannElement.terms` exposes the
sparse normal form with zero coefficients dropped.
"""

from __future__ import annotations

import enum
import math
from functools import lru_cache
from numbers import Real

import numpy as np

from .errors import DimensionError, DomainError, NotInvertibleError

__all__ = [
    "GrassmannElement",
    "Parity",
    "generator",
    "scalar",
    "multiply",
    "invert",
    "body",
    "soul",
    "parity_of",
    "monomial_sign",
]


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"
    MIXED = "mixed"

    def __str__(self):
        return self.value


def _popcount(x: int) -> int:
    return bin(x).count("1")


def monomial_sign(a: int, b: int) -> int:
    """Sign of ``xi^a * xi^b`` once reordered into increasing order.

    Returns 0 when the two monomials share a generator.
    """
    if a & b:
        return 0
    inversions = 0
    j = b
    while j:
        low = j & -j
        # generators of ``a`` with larger index than this generator of ``b``
        inversions += _popcount(a & ~((low << 1) - 1))
        j ^= low
    return -1 if inversions % 2 else 1


@lru_cache(maxsize=None)
def _product_table(n: int):
    size = 1 << n
    left, right, out, sign = [], [], [], []
    for a in range(size):
        for b in range(size):
            if a & b:
                continue
            left.append(a)
            right.append(b)
            out.append(a | b)
            sign.append(monomial_sign(a, b))
    return (np.array(left, dtype=np.intp), np.array(right, dtype=np.intp),
            np.array(out, dtype=np.intp), np.array(sign, dtype=float))


@lru_cache(maxsize=None)
def _degrees(n: int) -> np.ndarray:
    return np.array([_popcount(m) for m in range(1 << n)], dtype=np.intp)


def _mask_from_indices(indices) -> tuple[int, int]:
    """Canonical mask and reordering sign for a sequence of 1-based indices."""
    mask = 0
    sign = 1
    for i in indices:
        bit = 1 << (int(i) - 1)
        s = monomial_sign(mask, bit)
        if s == 0:
            return 0, 0
        sign *= s
        mask |= bit
    return mask, sign


def _indices_from_mask(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


class GrassmannElement:
    """Immutable element of the Grassmann algebra on ``num_generators`` generators."""

    __slots__ = ("num_generators", "_coeffs")

    def __init__(self, num_generators: int, coeffs=None):
        if num_generators < 0:
            raise DimensionError("number of generators must be >= 0")
        size = 1 << num_generators
        if coeffs is None:
            arr = np.zeros(size)
        else:
            arr = np.array(coeffs, dtype=float)
            if arr.shape != (size,):
                raise DimensionError(
                    f"expected {size} coefficients for N={num_generators}, got shape {arr.shape}")
        arr.setflags(write=False)
        self.num_generators = num_generators
        self._coeffs = arr

    # -- construction -------------------------------------------------------
    @classmethod
    def from_terms(cls, num_generators: int, terms) -> "GrassmannElement":
        """Build from ``{index tuple: coefficient}``; indices are 1-based, any order."""
        arr = np.zeros(1 << num_generators)
        for idx, c in dict(terms).items():
            idx = (idx,) if isinstance(idx, int) else tuple(idx)
            for i in idx:
                if not 1 <= i <= num_generators:
                    raise DimensionError(f"generator index {i} outside 1..{num_generators}")
            mask, sign = _mask_from_indices(idx)
            if sign:
                arr[mask] += sign * float(c)
        return cls(num_generators, arr)

    @classmethod
    def scalar(cls, num_generators: int, value: float) -> "GrassmannElement":
        arr = np.zeros(1 << num_generators)
        arr[0] = value
        return cls(num_generators, arr)

    @classmethod
    def generator(cls, num_generators: int, index: int) -> "GrassmannElement":
        if not 1 <= index <= num_generators:
            raise DimensionError(f"generator index {index} outside 1..{num_generators}")
        arr = np.zeros(1 << num_generators)
        arr[1 << (index - 1)] = 1.0
        return cls(num_generators, arr)

    # -- views --------------------------------------------------------------
    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def terms(self) -> dict[tuple[int, ...], float]:
        nz = np.flatnonzero(self._coeffs)
        return {_indices_from_mask(int(m)): float(self._coeffs[m]) for m in nz}

    @property
    def body(self) -> float:
        return float(self._coeffs[0])

    @property
    def soul(self) -> "GrassmannElement":
        arr = self._coeffs.copy()
        arr[0] = 0.0
        return GrassmannElement(self.num_generators, arr)

    @property
    def parity(self) -> Parity:
        degs = _degrees(self.num_generators)[np.flatnonzero(self._coeffs)]
        if degs.size == 0 or np.all(degs % 2 == 0):
            return Parity.EVEN
        if np.all(degs % 2 == 1):
            return Parity.ODD
        return Parity.MIXED

    def is_zero(self) -> bool:
        return not np.any(self._coeffs)

    def coefficient(self, *indices: int) -> float:
        mask, sign = _mask_from_indices(indices)
        return sign * float(self._coeffs[mask]) if sign else 0.0

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "GrassmannElement":
        if isinstance(other, GrassmannElement):
            if other.num_generators != self.num_generators:
                raise DimensionError(
                    f"cannot combine elements with N={self.num_generators} and N={other.num_generators}")
            return other
        if isinstance(other, (Real, np.floating, np.integer)):
            return GrassmannElement.scalar(self.num_generators, float(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GrassmannElement(self.num_generators, self._coeffs + other._coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GrassmannElement(self.num_generators, self._coeffs - other._coeffs)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return GrassmannElement(self.num_generators, -self._coeffs)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, (Real, np.floating, np.integer)):
            return GrassmannElement(self.num_generators, self._coeffs * float(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (Real, np.floating, np.integer)):
            return GrassmannElement(self.num_generators, self._coeffs * float(other))
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (Real, np.floating, np.integer)):
            if other == 0:
                raise NotInvertibleError("division by zero scalar")
            return GrassmannElement(self.num_generators, self._coeffs / float(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return multiply(self, invert(other))

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return multiply(other, invert(self))

    def __pow__(self, exponent: int):
        if not isinstance(exponent, (int, np.integer)):
            raise TypeError("only integer powers are supported")
        base = self if exponent >= 0 else invert(self)
        result = GrassmannElement.scalar(self.num_generators, 1.0)
        e = abs(int(exponent))
        while e:
            if e & 1:
                result = multiply(result, base)
            e >>= 1
            if e:
                base = multiply(base, base)
        return result

    def __eq__(self, other):
        if isinstance(other, (Real, np.floating, np.integer)):
            other = GrassmannElement.scalar(self.num_generators, float(other))
        if not isinstance(other, GrassmannElement):
            return NotImplemented
        return (self.num_generators == other.num_generators
                and bool(np.array_equal(self._coeffs, other._coeffs)))

    def __hash__(self):
        return hash((self.num_generators, self._coeffs.tobytes()))

    def allclose(self, other, atol: float = 1e-12, rtol: float = 1e-12) -> bool:
        other = self._coerce(other)
        return bool(np.allclose(self._coeffs, other._coeffs, atol=atol, rtol=rtol))

    def max_abs_diff(self, other) -> float:
        other = self._coerce(other)
        return float(np.max(np.abs(self._coeffs - other._coeffs)))

    def __repr__(self):
        terms = self.terms
        if not terms:
            return f"GrassmannElement(N={self.num_generators}, 0)"
        parts = []
        for idx, c in sorted(terms.items(), key=lambda kv: (len(kv[0]), kv[0])):
            mono = "".join(f"ξ{i}" for i in idx)
            parts.append(f"{c:g}{'·' + mono if mono else ''}")
        return f"GrassmannElement(N={self.num_generators}, {' + '.join(parts)})"

    # -- smooth functions via nilpotent Taylor expansion ---------------------
    def apply(self, name: str) -> "GrassmannElement":
        """Evaluate ``sin``, ``cos``, ``exp``, ``log``, ``sqrt`` or ``atan``.

        ``f(b + s) = sum_p f^(p)(b) s^p / p!``, which terminates because ``s`` is
        nilpotent.
        """
        b = self.body
        s = self.soul
        derivs = _derivative_values(name, b, self.num_generators, s.is_zero())
        result = GrassmannElement.scalar(self.num_generators, derivs[0])
        power = GrassmannElement.scalar(self.num_generators, 1.0)
        for p in range(1, len(derivs)):
            power = multiply(power, s)
            if power.is_zero():
                break
            result = result + power * (derivs[p] / math.factorial(p))
        return result


def _derivative_values(name: str, b: float, order: int, body_only: bool) -> list[float]:
    if name == "sin":
        cyc = [math.sin(b), math.cos(b), -math.sin(b), -math.cos(b)]
        return [cyc[p % 4] for p in range(order + 1)]
    if name == "cos":
        cyc = [math.cos(b), -math.sin(b), -math.cos(b), math.sin(b)]
        return [cyc[p % 4] for p in range(order + 1)]
    if name == "exp":
        return [math.exp(b)] * (order + 1)
    if name == "log":
        if b <= 0:
            raise DomainError(f"log of element with nonpositive body {b}")
        return [math.log(b)] + [(-1) ** (p - 1) * math.factorial(p - 1) / b ** p
                                for p in range(1, order + 1)]
    if name == "sqrt":
        if b < 0 or (b == 0 and not body_only):
            raise DomainError(f"sqrt of element with body {b}")
        if b == 0:
            return [0.0] + [0.0] * order
        vals = []
        coef = 1.0
        for p in range(order + 1):
            vals.append(coef * b ** (0.5 - p))
            coef *= 0.5 - p
        return vals
    if name == "atan":
        vals = [math.atan(b)]
        z = complex(b, -1.0)
        for p in range(1, order + 1):
            vals.append((-1) ** (p - 1) * math.factorial(p - 1) * (z ** -p).imag)
        return vals
    raise ValueError(f"unknown function {name!r}")


def multiply(a: GrassmannElement, b: GrassmannElement) -> GrassmannElement:
    if a.num_generators != b.num_generators:
        raise DimensionError(
            f"cannot multiply elements with N={a.num_generators} and N={b.num_generators}")
    n = a.num_generators
    left, right, out, sign = _product_table(n)
    ca, cb = a.coeffs, b.coeffs
    weights = sign * ca[left] * cb[right]
    return GrassmannElement(n, np.bincount(out, weights=weights, minlength=1 << n))


def invert(a: GrassmannElement) -> GrassmannElement:
    """Two-sided inverse via the finite Neumann series in ``-soul/body``."""
    b = a.body
    if b == 0.0:
        raise NotInvertibleError("element with zero body is not invertible")
    n = a.num_generators
    q = a.soul * (-1.0 / b)
    term = GrassmannElement.scalar(n, 1.0)
    total = term
    for _ in range(n):
        term = multiply(term, q)
        if term.is_zero():
            break
        total = total + term
    return total * (1.0 / b)


def generator(num_generators: int, index: int) -> GrassmannElement:
    return GrassmannElement.generator(num_generators, index)


def scalar(num_generators: int, value: float) -> GrassmannElement:
    return GrassmannElement.scalar(num_generators, value)


def body(a: GrassmannElement) -> float:
    return a.body


def soul(a: GrassmannElement) -> GrassmannElement:
    return a.soul


def parity_of(a: GrassmannElement) -> Parity:
    return a.parity
