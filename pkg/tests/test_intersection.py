import math

import numpy as np
import pytest

from supergeo.atlas import MorphismModel, angle_lift_morphism, get_model, identity_morphism
from supergeo.errors import DegeneracyError, ModelError, NonTransversalError, ResolutionError
from supergeo.intersection import (
    check_pi_model,
    check_pi_morphism,
    comparison_matrices,
    coordinate_slice,
    euler_pair_pi,
    euler_report,
    find_body_intersections,
    homotopy_invariance_check,
    intersection_pair,
    intersection_report,
    sign_pair_at,
)
from supergeo.orientation import chart_orientation
from supergeo.pigrass import build_pi_grassmannian, standard_morse_field

from .oracles import level_crossings, winding_number
from .torus import CASES, ROTATING, S1, SLIDING_OFF, T2, VERTICAL, circle_map, homotopy, positive_frame_change


@pytest.mark.parametrize("name", list(CASES))
def test_torus_family_pairs(name):
    rep = intersection_pair(circle_map(name), VERTICAL)
    assert rep.total.as_tuple() == CASES[name][3]
    assert rep.transversal


@pytest.mark.parametrize("name", list(CASES))
def test_first_total_matches_body_oracle(name):
    _, lift, _, _ = CASES[name]
    signed, unsigned = level_crossings(lift)
    rep = intersection_pair(circle_map(name), VERTICAL)
    assert rep.total.even == signed == winding_number(lift)
    assert len(rep.points) == unsigned


def test_point_counts():
    assert len(find_body_intersections(circle_map("basic"), VERTICAL)) == 1
    assert len(find_body_intersections(circle_map("avoiding"), VERTICAL)) == 0
    pts = find_body_intersections(circle_map("double_wrap"), VERTICAL)
    angles = sorted((float(x[0]) % (2 * math.pi)) for _, x, _ in pts)
    assert np.allclose(angles, [0.0, math.pi], atol=1e-9)


def test_counts_stable_under_grid_density():
    for density in (8, 16, 64, 200):
        assert intersection_pair(circle_map("cancellation"), VERTICAL, grid_density=density).total.as_tuple() == (0, 0)


def test_sign_pair_examples():
    assert sign_pair_at(circle_map("basic"), VERTICAL, "U", [0.0]).as_tuple() == (1, 1)
    flipped = circle_map("basic", odd="-xi1")
    assert sign_pair_at(flipped, VERTICAL, "U", [0.0]).as_tuple() == (1, -1)
    assert intersection_pair(flipped, VERTICAL).total.as_tuple() == (1, -1)


def test_signs_unchanged_by_positive_frame_change():
    rng = np.random.default_rng(3)
    f = circle_map("double_wrap")
    for chart, x, piece in find_body_intersections(f, VERTICAL):
        J0, J1, _ = comparison_matrices(f, VERTICAL, chart, x, piece)
        for J in (J0, J1):
            M = positive_frame_change(rng, J.shape[0])
            assert np.sign(np.linalg.det(J @ M)) == np.sign(np.linalg.det(J))
            assert np.sign(np.linalg.det(M @ J)) == np.sign(np.linalg.det(J))


def test_reversing_source_orientation():
    f = circle_map("double_wrap")
    ox, oy = chart_orientation(S1), chart_orientation(T2)
    even_rev = {c: (-s0, s1) for c, (s0, s1) in ox.items()}
    odd_rev = {c: (s0, -s1) for c, (s0, s1) in ox.items()}
    base = intersection_report(f, VERTICAL, orientations=(ox, oy))
    a = intersection_report(f, VERTICAL, orientations=(even_rev, oy))
    b = intersection_report(f, VERTICAL, orientations=(odd_rev, oy))
    for p, pa, pb in zip(base.points, a.points, b.points):
        assert pa.sign.as_tuple() == (-p.sign.even, p.sign.odd)
        assert pb.sign.as_tuple() == (p.sign.even, -p.sign.odd)
    assert a.total.even == -base.total.even


@pytest.mark.parametrize("name", list(CASES))
def test_pi_symmetric_maps_have_equal_signs(name):
    f = circle_map(name)
    assert check_pi_morphism(f).ok
    for p in intersection_report(f, VERTICAL).points:
        assert p.sign.even == p.sign.odd
        assert abs(p.det_even - p.det_odd) < 1e-12


def test_pi_check_examples():
    assert check_pi_morphism(identity_morphism(T2)).ok
    bad = check_pi_morphism(circle_map("basic", odd="-xi1"))
    assert not bad.ok and bad.max_residual == pytest.approx(2.0)
    assert check_pi_model(build_pi_grassmannian(1, 2)).ok
    with pytest.raises(ModelError):
        check_pi_model(get_model("N11"))


def test_homotopies():
    for lift, odd in (ROTATING, SLIDING_OFF, ("x1", "xi1")):
        H = homotopy(lift, odd, "H")
        res = homotopy_invariance_check(H, S1, VERTICAL)
        assert res.ok, res


def test_sliding_homotopy_endpoints():
    res = homotopy_invariance_check(homotopy(*SLIDING_OFF, "slide"), S1, VERTICAL)
    assert res.start == res.end == (0, 0)
    res = homotopy_invariance_check(homotopy(*ROTATING, "rotate"), S1, VERTICAL)
    assert res.start == res.end == (1, 1)


def test_non_transversal_odd_block():
    f = angle_lift_morphism(S1, T2, ["x1", "0.5"], ["0", "0"])
    rep = intersection_report(f, VERTICAL)
    assert [p.sign.as_tuple() for p in rep.points] == [(1, 0)]
    with pytest.raises(NonTransversalError):
        intersection_pair(f, VERTICAL)


def test_close_roots_are_ambiguous():
    f = angle_lift_morphism(S1, T2, ["10*(x1 - 0.5)*(x1 - 0.5000001)", "0.5"], ["xi1", "0"])
    with pytest.raises(ResolutionError):
        intersection_pair(f, VERTICAL)


def test_dimension_and_compactness_checks():
    Z = coordinate_slice(T2, ["U*U"], [], [])
    with pytest.raises(ModelError):
        intersection_pair(circle_map("basic"), Z)
    with pytest.raises(ModelError):
        intersection_pair(MorphismModel(get_model("K21"), T2, ()), VERTICAL)


# -- Euler pairs ----------------------------------------------------------------

SPHERE_FIELDS = [
    standard_morse_field(2),
    {"U1": ["x1^2 - x2^2 - 1", "2*x1*x2"], "U2": ["x1^2 - x2^2 - 1", "2*x1*x2"]},
]


@pytest.mark.parametrize("field", SPHERE_FIELDS)
def test_sphere_euler_pair(field):
    assert euler_pair_pi(build_pi_grassmannian(1, 2), field) == (2, 2)


def test_sphere_zeros_deduplicated_across_charts():
    rep = euler_report(build_pi_grassmannian(1, 2), SPHERE_FIELDS[1])
    assert len(rep.zeros) == 2
    assert sorted(round(z.point[0]) for z in rep.zeros if z.chart == "U1") in ([-1, 1], [-1], [1])


def test_projective_plane_euler_pair():
    M = build_pi_grassmannian(1, 3)
    assert euler_pair_pi(M, standard_morse_field(3)) == (3, 3)
    assert euler_pair_pi(M, standard_morse_field(3, [1, 4, 9])) == (3, 3)


def test_torus_without_zeros():
    field = {c: ["1", "0"] for c in T2.chart_ids}
    assert euler_pair_pi(T2, field) == (0, 0)


def test_euler_needs_pi_structure():
    with pytest.raises(ModelError):
        euler_pair_pi(get_model("N11"), {"U": ["1"], "V": ["1"]})


def test_inconsistent_field_rejected():
    field = {"U1": ["x1", "x2"], "U2": ["1", "0"]}
    with pytest.raises(ModelError):
        euler_pair_pi(build_pi_grassmannian(1, 2), field)


def test_degenerate_zero_rejected():
    # w' = w^2 has a double zero at w = 0; near infinity u' = -1
    field = {"U1": ["x1^2 - x2^2", "2*x1*x2"], "U2": ["-1", "0"]}
    with pytest.raises(DegeneracyError):
        euler_pair_pi(build_pi_grassmannian(1, 2), field)
