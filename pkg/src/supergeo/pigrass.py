"""Supergrassmannian and Pi-symmetric Grassmannian atlases, realified.

Complex superfunctions are pairs ``(re, im)`` of real normal forms.  Complex
even coordinate ``e`` becomes the real pair ``x_{2e+1}, x_{2e+2}`` and complex
odd coordinate ``o`` the pair ``xi_{2o+1}, xi_{2o+2}`` (1-based names).

Chart ``I`` carries a matrix ``Z_I`` whose columns indexed by ``I`` form a
unit matrix.  The transition from chart ``J`` to chart ``I`` reads the chart-I
coordinates off ``B_IJ^{-1} Z_J``, with ``B_IJ`` the ``I`` columns of ``Z_J``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .atlas.model import Chart, Overlap, PiStructure, SuperManifoldModel, TransitionMap
from .atlas.supermap import SuperMap
from .errors import DimensionError, ModelError
from .superexpr import CoordinateSystem
from .superexpr.forms import OddPolynomialForm
from .superexpr.nodes import ONE, ZERO, Const, EvenVar, Expr, OddVar, mul
from .superexpr.numeric import compile_many
from .superexpr.predicate import TRUE, Compare, conjoin

BOX = 1.5
SEED = 20240611
SAMPLES_PER_OVERLAP = 3
DET_REJECT = 1e-6


@dataclass(frozen=True)
class CForm:
    """Complex superfunction ``re + i im``."""

    re: OddPolynomialForm
    im: OddPolynomialForm

    @classmethod
    def const(cls, n: int, value: float) -> "CForm":
        return cls(OddPolynomialForm.constant(n, Const(float(value))), OddPolynomialForm(n))

    def __add__(self, o: "CForm") -> "CForm":
        return CForm(self.re + o.re, self.im + o.im)

    def __sub__(self, o: "CForm") -> "CForm":
        return CForm(self.re - o.re, self.im - o.im)

    def __neg__(self) -> "CForm":
        return CForm(-self.re, -self.im)

    def __mul__(self, o: "CForm") -> "CForm":
        return CForm(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def inverse(self) -> "CForm":
        """``conj(c) / |c|^2``; the odd-polynomial inverse handles nilpotent parts."""
        inv = (self.re * self.re + self.im * self.im).inverse()
        return CForm(self.re * inv, -(self.im * inv))

    def body_abs2(self) -> Expr:
        from .superexpr.nodes import add
        b_re, b_im = self.re.body, self.im.body
        return add(mul(b_re, b_re), mul(b_im, b_im))


Matrix = list  # list of rows of CForm


def _zero(n: int) -> CForm:
    return CForm.const(n, 0.0)


def mat_mul(a: Matrix, b: Matrix, n: int) -> Matrix:
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = _zero(n)
            for k in range(inner):
                if a[i][k].is_zero() or b[k][j].is_zero():
                    continue
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _det(a: Matrix, n: int) -> CForm:
    size = len(a)
    if size == 0:
        return CForm.const(n, 1.0)
    if size == 1:
        return a[0][0]
    total = _zero(n)
    for j in range(size):
        minor = [row[:j] + row[j + 1:] for row in a[1:]]
        term = a[0][j] * _det(minor, n)
        total = total + term if j % 2 == 0 else total - term
    return total


def _even_inverse(a: Matrix, n: int) -> tuple[Matrix, CForm]:
    """Adjugate over determinant for a square block with even entries."""
    size = len(a)
    if size == 0:
        return [], CForm.const(n, 1.0)
    det = _det(a, n)
    inv_det = det.inverse()
    out = []
    for i in range(size):
        row = []
        for j in range(size):
            minor = [r[:i] + r[i + 1:] for k, r in enumerate(a) if k != j]
            cof = _det(minor, n)
            if (i + j) % 2:
                cof = -cof
            row.append(cof * inv_det)
        out.append(row)
    return out, det


def supermatrix_inverse(b: Matrix, p: int, n: int) -> tuple[Matrix, CForm, CForm]:
    """Inverse of a square supermatrix with even diagonal blocks of sizes ``p`` and ``len(b) - p``.

    Split ``B = S + N`` with ``S`` block diagonal and ``N`` the odd off-diagonal
    blocks; ``B^{-1} = sum_k (-S^{-1} N)^k S^{-1}``, finite because ``N`` is
    nilpotent.  Also returns the determinants of the two diagonal blocks.
    """
    size = len(b)
    s00 = [row[:p] for row in b[:p]]
    s11 = [row[p:] for row in b[p:]]
    inv00, d0 = _even_inverse(s00, n)
    inv11, d1 = _even_inverse(s11, n)
    s_inv = [[_zero(n) for _ in range(size)] for _ in range(size)]
    for i in range(p):
        for j in range(p):
            s_inv[i][j] = inv00[i][j]
    for i in range(size - p):
        for j in range(size - p):
            s_inv[p + i][p + j] = inv11[i][j]
    nil = [[b[i][j] if (i < p) != (j < p) else _zero(n) for j in range(size)] for i in range(size)]
    step = [[-e for e in row] for row in mat_mul(s_inv, nil, n)]
    result = s_inv
    term = s_inv
    for _ in range(n + 1):
        term = mat_mul(step, term, n)
        if all(e.is_zero() for row in term for e in row):
            break
        result = mat_add(result, term)
    return result, d0, d1


@dataclass(frozen=True)
class Layout:
    """Positions of the complex coordinates inside a chart matrix."""

    label: tuple[tuple[int, ...], tuple[int, ...]]
    even: tuple[tuple[int, int], ...]
    odd: tuple[tuple[int, int], ...]


class GrassmannianBuilder:
    def __init__(self, k: int, l: int, m: int, n: int, pi: bool):
        self.k, self.l, self.m, self.n, self.pi = k, l, m, n, pi
        if pi:
            if k != l or m != n:
                raise DimensionError("the Pi-symmetric Grassmannian needs k = l and m = n")
            self.ce = self.co = k * (m - k)
        else:
            self.ce = k * (m - k) + l * (n - l)
            self.co = k * (n - l) + l * (m - k)
        self.M, self.N = 2 * self.ce, 2 * self.co
        self.coords = CoordinateSystem.standard(self.M, self.N)

    def labels(self):
        if self.pi:
            return [(I, I) for I in itertools.combinations(range(self.m), self.k)]
        return [(I0, I1) for I0 in itertools.combinations(range(self.m), self.k)
                for I1 in itertools.combinations(range(self.n), self.l)]

    def chart_id(self, label) -> str:
        I0, I1 = label
        s0 = ",".join(str(i + 1) for i in I0)
        if self.pi:
            return f"U{s0}"
        return f"U{s0}|{','.join(str(i + 1) for i in I1)}"

    def layout(self, label) -> Layout:
        I0, I1 = label
        k, l, m, n = self.k, self.l, self.m, self.n
        rest0 = [c for c in range(m) if c not in I0]
        rest1 = [c for c in range(n) if c not in I1]
        if self.pi:
            even = tuple((r, c) for r in range(k) for c in rest0)
            odd = tuple((r, m + c) for r in range(k) for c in rest0)
            return Layout(label, even, odd)
        even = tuple((r, c) for r in range(k) for c in rest0) + \
            tuple((k + r, m + c) for r in range(l) for c in rest1)
        odd = tuple((r, m + c) for r in range(k) for c in rest1) + \
            tuple((k + r, c) for r in range(l) for c in rest0)
        return Layout(label, even, odd)

    def _var(self, kind: str, idx: int) -> CForm:
        n = self.N
        if kind == "even":
            return CForm(OddPolynomialForm.constant(n, EvenVar(2 * idx)),
                         OddPolynomialForm.constant(n, EvenVar(2 * idx + 1)))
        return CForm(OddPolynomialForm(n, {1 << (2 * idx): ONE}),
                     OddPolynomialForm(n, {1 << (2 * idx + 1): ONE}))

    def chart_matrix(self, label) -> Matrix:
        rows, cols = (2 * self.k, 2 * self.m) if self.pi else (self.k + self.l, self.m + self.n)
        Z = [[_zero(self.N) for _ in range(cols)] for _ in range(rows)]
        I0, I1 = label
        for r, c in enumerate(I0):
            Z[r][c] = CForm.const(self.N, 1.0)
        if self.pi:
            for r, c in enumerate(I0):
                Z[self.k + r][self.m + c] = CForm.const(self.N, 1.0)
            lay = self.layout(label)
            for e, (r, c) in enumerate(lay.even):
                x = self._var("even", e)
                Z[r][c] = x
                Z[self.k + r][self.m + c] = x
            for o, (r, c) in enumerate(lay.odd):
                xi = self._var("odd", o)
                Z[r][c] = xi
                Z[self.k + r][c - self.m] = -xi
            return Z
        for r, c in enumerate(I1):
            Z[self.k + r][self.m + c] = CForm.const(self.N, 1.0)
        lay = self.layout(label)
        for e, (r, c) in enumerate(lay.even):
            Z[r][c] = self._var("even", e)
        for o, (r, c) in enumerate(lay.odd):
            Z[r][c] = self._var("odd", o)
        return Z

    def column_indices(self, label) -> list[int]:
        I0, I1 = label
        return list(I0) + [self.m + c for c in I1]

    def transition_matrix(self, source, target) -> tuple[Matrix, CForm, CForm]:
        """``B_IJ^{-1} Z_J`` for ``J = source``, ``I = target``, plus the block determinants."""
        ZJ = self.chart_matrix(source)
        cols = self.column_indices(target)
        B = [[row[c] for c in cols] for row in ZJ]
        p = self.k
        Binv, d0, d1 = supermatrix_inverse(B, p, self.N)
        return mat_mul(Binv, ZJ, self.N), d0, d1

    def transition(self, source, target, rng) -> TransitionMap:
        W, d0, d1 = self.transition_matrix(source, target)
        lay = self.layout(target)
        ev, od = [], []
        for r, c in lay.even:
            ev += [W[r][c].re.to_expr(), W[r][c].im.to_expr()]
        for r, c in lay.odd:
            od += [W[r][c].re.to_expr(), W[r][c].im.to_expr()]
        smap = SuperMap(self.coords, ev + od, self.M)
        dets = [d.body_abs2() for d in (d0, d1) if not (isinstance(d.re.body, Const) and d.im.is_zero())]
        pred = conjoin(*[Compare((e, ZERO), (">",)) for e in dets]) if dets else TRUE
        samples = self._samples(dets, rng)
        return TransitionMap(self.chart_id(source), self.chart_id(target), smap, (Overlap(pred, samples),))

    def _samples(self, det_exprs, rng) -> np.ndarray:
        fn = compile_many(det_exprs) if det_exprs else None
        out = []
        for _ in range(1000):
            x = rng.uniform(-BOX, BOX, size=self.M)
            if fn is not None and np.min(np.sqrt(fn(x.reshape(-1, 1))[:, 0])) < DET_REJECT:
                continue
            out.append(x)
            if len(out) == SAMPLES_PER_OVERLAP:
                return np.array(out)
        raise ModelError("could not generate overlap samples")

    def build(self, name: str, seed: int = SEED) -> SuperManifoldModel:
        rng = np.random.default_rng(seed)
        labels = self.labels()
        charts = tuple(Chart(self.chart_id(L), self.coords, TRUE, ((-BOX, BOX),) * self.M) for L in labels)
        trans = tuple(self.transition(J, I, rng) for J in labels for I in labels if I != J)
        ps = PiStructure.identity([c.id for c in charts], self.M) if self.pi else None
        meta = {"k": self.k, "l": self.l, "m": self.m, "n": self.n, "pi": self.pi,
                "layouts": {self.chart_id(L): {"even": self.layout(L).even, "odd": self.layout(L).odd}
                            for L in labels}}
        return SuperManifoldModel(name, self.M, self.N, charts, trans, compact_body=True,
                                  pi_structure=ps, metadata=meta,
                                  description=f"realified Grassmannian {self.k}|{self.l} in {self.m}|{self.n}"
                                  + (" (Pi-symmetric)" if self.pi else ""))


def build_supergrassmannian(k: int, l: int, m: int, n: int, seed: int = SEED) -> SuperManifoldModel:
    if not (0 <= k <= m and 0 <= l <= n) or not (0 < k < m or 0 < l < n):
        raise DimensionError(f"need 0 <= k <= m, 0 <= l <= n and a nontrivial choice; got {k}|{l} in {m}|{n}")
    return GrassmannianBuilder(k, l, m, n, pi=False).build(f"grassmannian:{k},{l},{m},{n}", seed)


def build_pi_grassmannian(k: int, m: int, seed: int = SEED) -> SuperManifoldModel:
    if not 0 < k < m:
        raise DimensionError(f"need 0 < k < m; got k={k}, m={m}")
    return GrassmannianBuilder(k, k, m, m, pi=True).build(f"pi-grassmannian:{k},{m}", seed)


def standard_morse_field(m: int, constants=None) -> dict[str, list[Expr]]:
    """Gradient-like field of ``sum_j c_j |z_j|^2 / sum_j |z_j|^2`` on realified CP^{m-1}.

    In chart ``U_i`` (where ``z_i = 1``) the affine coordinate ``w_j = z_j / z_i``
    moves by ``dw_j/dt = (c_j - c_i) w_j``, the flow of ``z_j -> e^{c_j t} z_j``.
    Its zeros are the chart origins, each of index +1.
    """
    if m < 2:
        raise DimensionError("need m >= 2")
    c = list(range(1, m + 1)) if constants is None else [float(v) for v in constants]
    if len(c) != m or len(set(c)) != m:
        raise ValueError("need m distinct constants")
    field = {}
    for i in range(m):
        comps = []
        e = 0
        for j in range(m):
            if j == i:
                continue
            lam = Const(float(c[j] - c[i]))
            comps += [mul(lam, EvenVar(2 * e)), mul(lam, EvenVar(2 * e + 1))]
            e += 1
        field[f"U{i + 1}"] = comps
    return field
