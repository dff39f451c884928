import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from supergeo.errors import DimensionError, NotInvertibleError
from supergeo.grassmann import (
    GrassmannElement,
    Parity,
    body,
    generator,
    invert,
    multiply,
    parity_of,
    scalar,
    soul,
)

from .oracles import term_product

N = 3
xi1, xi2, xi3 = (generator(N, i) for i in (1, 2, 3))
one = scalar(N, 1.0)


def test_generators_anticommute():
    assert multiply(xi1, xi2).terms == {(1, 2): 1.0}
    assert multiply(xi2, xi1).terms == {(1, 2): -1.0}
    assert multiply(xi1, xi1).is_zero()


def test_square_of_even_nilpotent():
    a = one + xi1 * xi2
    assert (a * a).terms == {(): 1.0, (1, 2): 2.0}


def test_body_soul_parity():
    a = GrassmannElement.from_terms(N, {(): 3.0, (1,): 2.0})
    assert body(a) == 3.0
    assert soul(a).terms == {(1,): 2.0}
    assert parity_of(xi1 * xi2) is Parity.EVEN
    assert parity_of(xi3) is Parity.ODD
    assert parity_of(one + xi1) is Parity.MIXED


def test_soul_cube_vanishes_here():
    a = 5 + xi1 + xi1 * xi2 * xi3
    s = soul(a)
    assert (s * s * s).is_zero()
    assert (s * s).is_zero()          # xi1 * (xi1 xi2 xi3) and its reverse both vanish


def test_invert_examples():
    assert invert(scalar(N, 2.0)).terms == {(): 0.5}
    assert invert(one + xi1 * xi2).allclose(one - xi1 * xi2)
    a = 2 + xi1 + xi2
    inv = invert(a)
    assert (a * inv).allclose(one) and (inv * a).allclose(one)
    # (xi1 + xi2)^2 = 0, so the series stops after the linear term
    assert inv.allclose(GrassmannElement.from_terms(N, {(): 0.5, (1,): -0.25, (2,): -0.25}))


def test_invert_needs_body():
    with pytest.raises(NotInvertibleError):
        invert(xi1 + xi2 * xi3)


def test_mismatched_generators():
    with pytest.raises(DimensionError):
        multiply(generator(2, 1), generator(3, 1))


def test_from_terms_sorts_indices():
    a = GrassmannElement.from_terms(N, {(2, 1): 1.0})
    assert a.terms == {(1, 2): -1.0}
    assert GrassmannElement.from_terms(N, {(1, 1): 4.0}).is_zero()


def test_normal_form_drops_zeros():
    assert (xi1 - xi1).terms == {}


# -- properties --------------------------------------------------------------

coef = st.floats(-3, 3, allow_nan=False, allow_infinity=False)


@st.composite
def elements(draw, n=None, parity=None):
    n = draw(st.integers(0, 6)) if n is None else n
    arr = np.array(draw(st.lists(coef, min_size=1 << n, max_size=1 << n)))
    if parity is not None:
        for mask in range(1 << n):
            if bin(mask).count("1") % 2 != parity:
                arr[mask] = 0.0
    return GrassmannElement(n, arr)


@st.composite
def triples(draw):
    n = draw(st.integers(0, 6))
    return tuple(draw(elements(n)) for _ in range(3))


def _close(a, b, tol=1e-12):
    scale = 1.0 + max(np.max(np.abs(a.coeffs)), np.max(np.abs(b.coeffs)))
    return np.max(np.abs(a.coeffs - b.coeffs)) <= tol * scale


@settings(max_examples=60, deadline=None)
@given(triples())
def test_associative_and_distributive(t):
    a, b, c = t
    assert _close((a * b) * c, a * (b * c))
    assert _close(a * (b + c), a * b + a * c)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 5).flatmap(lambda n: st.tuples(elements(n), elements(n))))
def test_product_matches_word_sorting_oracle(pair):
    a, b = pair
    expected = term_product(a.terms, b.terms)
    got = (a * b).terms
    keys = set(expected) | set(got)
    assert all(abs(expected.get(k, 0.0) - got.get(k, 0.0)) < 1e-9 for k in keys)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 6).flatmap(lambda n: st.tuples(
    st.integers(0, 1), st.integers(0, 1)).flatmap(
        lambda pq: st.tuples(st.just(pq), elements(n, pq[0]), elements(n, pq[1])))))
def test_supercommutative(data):
    (p, q), a, b = data
    assert _close(a * b, (-1) ** (p * q) * (b * a))


@settings(max_examples=60, deadline=None)
@given(elements())
def test_inverse_two_sided(a):
    a = a + (2.0 - a.body) if abs(a.body) < 0.5 else a
    one = scalar(a.num_generators, 1.0)
    inv = invert(a)
    assert _close(a * inv, one) and _close(inv * a, one)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 5).flatmap(lambda n: st.tuples(elements(n), elements(n))))
def test_body_is_a_homomorphism(pair):
    a, b = pair
    assert abs(body(a * b) - body(a) * body(b)) < 1e-9
    assert abs(body(a + b) - body(a) - body(b)) < 1e-12


@settings(max_examples=40, deadline=None)
@given(elements())
def test_soul_nilpotent(a):
    s = soul(a)
    p = scalar(a.num_generators, 1.0)
    for _ in range(a.num_generators + 1):
        p = p * s
    assert p.is_zero() or np.max(np.abs(p.coeffs)) < 1e-9
