import math

import numpy as np
import pytest

from supergeo.atlas import validate_model
from supergeo.errors import DimensionError
from supergeo.intersection import check_pi_model
from supergeo.orientation import Tag, classify
from supergeo.pigrass import build_pi_grassmannian, build_supergrassmannian, standard_morse_field


def realify(z: complex) -> np.ndarray:
    """Real 2x2 matrix of multiplication by ``z`` on (Re, Im)."""
    return np.array([[z.real, -z.imag], [z.imag, z.real]])


def test_projective_line_transition_is_inversion():
    M = build_supergrassmannian(1, 0, 2, 0)
    assert M.dim == "2|0" and M.chart_ids == ["U1|", "U2|"]
    t = M.transitions_between("U1|", "U2|")[0]
    rng = np.random.default_rng(0)
    for _ in range(5):
        x = rng.uniform(-1.5, 1.5, 2)
        w = complex(*x)
        got = t.map.body(x.reshape(-1, 1))[:, 0]
        assert np.allclose(got, [(1 / w).real, (1 / w).imag])


@pytest.mark.parametrize("x", [[1.0, 0.0], [0.7, 0.4], [-0.3, 1.2]])
def test_pi_transition_blocks_against_complex_oracle(x):
    # w' = 1/w and xi' = -xi/w^2 in the other affine chart
    M = build_pi_grassmannian(1, 2)
    t = M.transitions_between("U1", "U2")[0]
    col = np.array(x).reshape(-1, 1)
    w = complex(*x)
    assert np.allclose(t.map.even_block(col)[..., 0], realify(-1 / w ** 2))
    assert np.allclose(t.map.odd_block(col)[..., 0], realify(-1 / w ** 2))
    if x == [1.0, 0.0]:
        assert np.allclose(t.map.odd_block(col)[..., 0], -np.eye(2))


@pytest.mark.parametrize("builder, args, dim, charts", [
    (build_supergrassmannian, (1, 1, 2, 2), "4|4", 4),
    (build_pi_grassmannian, (1, 2), "2|2", 2),
    (build_pi_grassmannian, (1, 3), "4|4", 3),
])
def test_generated_models_validate(builder, args, dim, charts):
    M = builder(*args)
    assert M.dim == dim and len(M.charts) == charts and M.compact_body
    rep = validate_model(M, 1e-9)
    assert rep.ok, rep.failures[:2]
    assert rep.max_cocycle_residual < 1e-9
    assert classify(M).tag is Tag.ORIENTABLE


def test_cocycle_checks_actually_run():
    rep = validate_model(build_pi_grassmannian(1, 3))
    assert sum(r.kind == "cocycle" for r in rep.records) > 0


def test_pi_transitions_pass_pi_check():
    for m in (2, 3):
        res = check_pi_model(build_pi_grassmannian(1, m))
        assert res.ok and res.max_residual < 1e-8 and res.checked > 0


def test_generation_is_deterministic():
    a, b = build_pi_grassmannian(1, 3), build_pi_grassmannian(1, 3)
    sa = [o.samples.tolist() for t in a.transitions for o in t.overlaps]
    sb = [o.samples.tolist() for t in b.transitions for o in t.overlaps]
    assert sa == sb
    c = build_pi_grassmannian(1, 3, seed=5)
    assert [o.samples.tolist() for t in c.transitions for o in t.overlaps] != sa
    assert validate_model(c).ok


def test_invalid_shapes():
    for k, m in ((0, 2), (2, 2), (1, 1)):
        with pytest.raises(DimensionError):
            build_pi_grassmannian(k, m)
    with pytest.raises(DimensionError):
        standard_morse_field(1)


def test_morse_field_shape():
    f = standard_morse_field(3)
    assert sorted(f) == ["U1", "U2", "U3"]
    assert all(len(v) == 4 for v in f.values())


@pytest.mark.parametrize("k, l, m, n", [(1, 0, 3, 1), (1, 1, 3, 2), (2, 1, 3, 2)])
def test_chart_count_is_binomial_product(k, l, m, n):
    M = build_supergrassmannian(k, l, m, n)
    assert len(M.charts) == math.comb(m, k) * math.comb(n, l)
    even = k * (m - k) + l * (n - l)
    odd = k * (n - l) + l * (m - k)
    assert (M.m, M.n) == (2 * even, 2 * odd)
