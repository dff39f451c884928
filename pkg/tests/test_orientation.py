import dataclasses

import numpy as np
import pytest

from supergeo.atlas import Chart, Overlap, SuperManifoldModel, SuperMap, TransitionMap, builtin_names, get_model, validate_model
from supergeo.errors import DegeneracyError, OrientationError
from supergeo.orientation import (
    GROUP,
    Tag,
    build_orienting_cover,
    bundle_view_check,
    chart_orientation,
    chart_signs,
    classify,
    deck_action,
    random_sign_cocycle_model,
)
from supergeo.superexpr import CoordinateSystem
from supergeo.superexpr.predicate import parse_predicate

from .helpers import recoordinatize, relabel, with_extra_sample

# rows: group element; columns P_1^1, P_1^0, P_0^1, P_0^0 (copied cell by cell)
DECK_TABLE = {
    (0, 0): ["P_1^1", "P_1^0", "P_0^1", "P_0^0"],
    (0, 1): ["P_1^0", "P_1^1", "P_0^0", "P_0^1"],
    (1, 0): ["P_0^1", "P_0^0", "P_1^1", "P_1^0"],
    (1, 1): ["P_0^0", "P_0^1", "P_1^0", "P_1^1"],
}
COLUMNS = ["P_1^1", "P_1^0", "P_0^1", "P_0^0"]


def test_deck_table_matches_reference():
    table = build_orienting_cover(get_model("S1_trivial")).deck_table()
    for g, row in DECK_TABLE.items():
        assert [table[g][c] for c in COLUMNS] == row


def test_deck_action_is_free_group_action():
    node = ("U", 1, -1)
    for g in GROUP:
        for h in GROUP:
            gh = ((g[0] + h[0]) % 2, (g[1] + h[1]) % 2)
            assert deck_action(g, deck_action(h, node)) == deck_action(gh, node)
        if g != (0, 0):
            assert deck_action(g, node) != node


@pytest.mark.parametrize("name, comps, body, bundle", [
    ("S1_trivial", 4, True, True),
    ("N11", 2, True, False),
    ("K21", 2, False, True),
    ("S21", 2, False, False),
    ("C32", 1, False, False),
    ("T2_pi", 4, True, True),
])
def test_classifications(name, comps, body, bundle):
    c = classify(get_model(name))
    assert (c.component_count, c.body_orientable, c.bundle_orientable) == (comps, body, bundle)
    assert c.tag is {4: Tag.ORIENTABLE, 2: Tag.SEMI, 1: Tag.NON}[comps]


def test_s21_generator_is_diagonal():
    assert classify(get_model("S21")).generator == (1, 1)


@pytest.mark.parametrize("name", builtin_names())
def test_stabilizer_times_components(name):
    cover = build_orienting_cover(get_model(name))
    assert cover.component_count in (1, 2, 4)
    assert len(cover.stabilizer) * cover.component_count == 4


@pytest.mark.parametrize("name", builtin_names())
def test_invariant_under_relabel_and_extra_sample(name):
    m = get_model(name)
    base = classify(m)
    ids = {c: f"chart_{i}" for i, c in enumerate(m.chart_ids)}
    assert classify(relabel(m, ids)) == base
    assert classify(with_extra_sample(m)) == base


@pytest.mark.parametrize("name", ["N11", "K21", "S21", "S1_trivial"])
def test_invariant_under_positive_coordinate_change(name):
    m = get_model(name)
    ev = [f"x{i + 1}" for i in range(m.m)]
    od = [f"xi{j + 1}" for j in range(m.n)]
    shifted = recoordinatize(m, "V", ["x1 + 0.75"] + ev[1:] + od, ["x1 - 0.75"] + ev[1:] + od)
    assert validate_model(shifted).ok
    assert classify(shifted) == classify(m)


@pytest.mark.parametrize("name", ["N11", "K21", "S21", "S1_trivial"])
def test_flipping_one_odd_coordinate(name):
    m = get_model(name)
    ev = [f"x{i + 1}" for i in range(m.m)]
    od = ["-xi1"] + [f"xi{j + 1}" for j in range(1, m.n)]
    flipped = recoordinatize(m, "V", ev + od, ev + od)
    assert validate_model(flipped).ok
    a, b = classify(flipped), classify(m)
    assert (a.tag, a.component_count) == (b.tag, b.component_count)
    # the node (V, s0, s1) now plays the role of (V, s0, -s1)
    ca, cb = build_orienting_cover(flipped), build_orienting_cover(m)
    for s0 in (1, -1):
        for s1 in (1, -1):
            assert ca.component_of[("V", s0, -s1)] == cb.component_of[("V", s0, s1)]


@pytest.mark.parametrize("name", builtin_names())
def test_bundle_view_on_registry(name):
    assert bundle_view_check(get_model(name))


def test_bundle_view_on_random_cocycles():
    rng = np.random.default_rng(11)
    for _ in range(25):
        m = random_sign_cocycle_model(rng, charts=int(rng.integers(2, 6)))
        assert validate_model(m).ok
        assert bundle_view_check(m)


def test_chart_orientation_only_for_orientable():
    signs = chart_orientation(get_model("T2_pi"))
    assert signs[get_model("T2_pi").chart_ids[0]] == (1, 1)
    with pytest.raises(OrientationError):
        chart_orientation(get_model("N11"))


def _two_chart(text, samples):
    coords = CoordinateSystem.standard(1, 1)
    charts = (Chart("A", coords), Chart("B", coords))
    pred = parse_predicate("-2 < x1 < 2", coords)
    t = TransitionMap("A", "B", SuperMap.from_strings(coords, [text, "xi1"], 1),
                      (Overlap(pred, np.array(samples)),))
    return SuperManifoldModel("probe", 1, 1, charts, (t,))


def test_degenerate_sign_raises():
    with pytest.raises(DegeneracyError):
        chart_signs(_two_chart("x1^3", [[0.0]]))


def test_sign_change_inside_one_component_detected():
    m = _two_chart("x1^3 - x1", [[0.0], [1.0]])
    chart_signs(m)                       # one sample per component: no complaint
    with pytest.raises(DegeneracyError):
        chart_signs(m, all_samples=True)
