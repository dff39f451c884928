import dataclasses
import math

import numpy as np
import pytest

from supergeo.atlas import (
    SuperMap,
    angle_lift_morphism,
    builtin_names,
    compose_morphisms,
    evaluate_morphism,
    get_model,
    identity_morphism,
    registry,
    validate_model,
    validate_morphism,
)
from supergeo.errors import DomainError, ModelError

S = get_model("S1_trivial")


def _angle_close(a, b, tol=1e-9):
    d = (np.asarray(a) - np.asarray(b)) / (2 * math.pi)
    return np.all(np.abs(d - np.round(d)) * 2 * math.pi < tol)


def test_registry_contents():
    reg = registry()
    assert len(reg) >= 6
    assert set(builtin_names()) <= set(reg)
    assert get_model("C32").dim == "3|2"
    with pytest.raises(ModelError):
        get_model("no-such-model")


@pytest.mark.parametrize("name", builtin_names())
def test_registry_model_validates(name):
    rep = validate_model(get_model(name), 1e-9)
    assert rep.ok, rep.failures[:3]
    assert rep.max_inverse_residual < 1e-9 and rep.max_cocycle_residual < 1e-9


def test_trivial_circle_residuals_tiny():
    rep = validate_model(S)
    assert max(r.value for r in rep.records if r.kind != "invertible") < 1e-12


def test_n11_atlas_shape_and_twist():
    m = get_model("N11")
    assert len(m.charts) == 2
    forward = m.transitions_between("U", "V")
    assert sum(len(t.overlaps) for t in forward) == 2
    blocks = []
    for t in forward:
        x = t.overlaps[0].samples[0].reshape(-1, 1)
        blocks.append(t.map.odd_block(x)[..., 0].tolist())
    assert sorted(blocks) == [[[-1.0]], [[1.0]]]


def _corrupt_n11():
    """Forward lower-arc gluing with the odd twist removed; the reverse map keeps it."""
    m = get_model("N11")
    trans = list(m.transitions)
    k = next(i for i, t in enumerate(trans)
             if t.source == "U" and t.overlaps[0].samples[0, 0] < 0)
    t = trans[k]
    coords = t.map.coords
    trans[k] = dataclasses.replace(t, map=SuperMap.from_strings(coords, [t.map.texts()[0], "xi1"], 1))
    return dataclasses.replace(m, transitions=tuple(trans))


def test_corrupted_mobius_is_flagged():
    rep = validate_model(_corrupt_n11())
    assert not rep.ok
    kinds = {r.kind for r in rep.failures}
    assert "inverse" in kinds or "inverse_block" in kinds
    assert all(r.transition in ("U->V", "V->U") for r in rep.failures)


@pytest.mark.parametrize("name", builtin_names())
def test_samples_satisfy_predicates(name):
    for t in get_model(name).transitions:
        for o in t.overlaps:
            assert all(o.contains(s) for s in o.samples)


@pytest.mark.parametrize("name", ["N11", "K21", "S21", "C32", "T2_pi"])
def test_inverse_blocks_are_matrix_inverses(name):
    m = get_model(name)
    for t in m.transitions:
        for o in t.overlaps:
            for s in o.samples:
                y = t.map.body(s.reshape(-1, 1))[:, 0]
                back = m.transition_at(t.target, t.source, y)
                A = t.map.even_block(s.reshape(-1, 1))[..., 0]
                B = back.map.even_block(y.reshape(-1, 1))[..., 0]
                assert np.allclose(B, np.linalg.inv(A), atol=1e-8)


def test_validation_does_not_depend_on_thread_count(monkeypatch):
    m = get_model("C32")
    one = validate_model(m).to_dict()
    monkeypatch.setenv("SUPERGEO_THREADS", "4")
    assert validate_model(m).to_dict() == one


# -- morphisms ----------------------------------------------------------------

def _lift(a, b=0.0, odd_scale=None):
    odd_scale = a if odd_scale is None else odd_scale
    return angle_lift_morphism(S, S, [f"{a}*x1 + {b}"], [f"{odd_scale}*xi1"], name=f"{a}x+{b}")


def test_angle_lift_morphisms_validate():
    for f in (_lift(1), _lift(2, 0.3), _lift(-1, 1.0), _lift(3)):
        rep = validate_morphism(f)
        assert rep.ok and any(r.kind == "compatible" for r in rep.records)


def test_compose_with_identity():
    f = _lift(2, 0.3)
    g = compose_morphisms(identity_morphism(S), f)
    for p in f.pieces:
        for s in p.samples:
            a, b = evaluate_morphism(f, p.source_chart, s), evaluate_morphism(g, p.source_chart, s)
            assert _angle_close(a.point, b.point)
            assert np.allclose(a.even_block, b.even_block) and np.allclose(a.odd_block, b.odd_block)


def test_antipodal_squared_is_identity():
    anti = angle_lift_morphism(S, S, ["x1 + pi"], ["xi1"], name="antipodal")
    assert validate_morphism(anti).ok
    twice = compose_morphisms(anti, anti)
    for c in S.charts:
        for x in (0.4, 1.9, 2.8):
            if not c.contains([x]):
                continue
            e = evaluate_morphism(twice, c.id, [x])
            assert _angle_close(e.point, [x])
            assert np.allclose(e.even_block, 1) and np.allclose(e.odd_block, 1)


def test_chain_of_three_matches_stepwise_evaluation():
    f, g, h = _lift(2, 0.3), _lift(-1, 1.0, 0.5), _lift(3, -0.2)
    chain = compose_morphisms(h, compose_morphisms(g, f))
    rng = np.random.default_rng(7)
    for x in rng.uniform(-3, 3, 12):
        chart = "U"
        direct = evaluate_morphism(chain, chart, [x])
        ch, pt, A, H = chart, np.array([x]), np.eye(1), np.eye(1)
        for step in (f, g, h):
            e = evaluate_morphism(step, ch, pt)
            ch, pt, A, H = e.chart, e.point, e.even_block @ A, e.odd_block @ H
        assert _angle_close(direct.point, pt)
        assert np.allclose(direct.even_block, A) and np.allclose(direct.odd_block, H)


def test_evaluation_outside_every_piece():
    f = _lift(1)
    with pytest.raises(DomainError):
        evaluate_morphism(f, "U", [4.0])
