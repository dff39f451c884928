"""Circle-into-torus test family shared by the intersection and acceptance tests."""

from __future__ import annotations

import math

import numpy as np

from supergeo.atlas import angle_lift_morphism, get_model, line_model, product_model
from supergeo.intersection import coordinate_slice

S1 = get_model("S1_trivial")
T2 = get_model("T2_pi")
# vertical circle {angle_1 = 0, xi_1 = 0}; angle 0 only lies in first-factor window U
VERTICAL = coordinate_slice(T2, ["U*U", "U*V"], [0], [0], name="vertical")

# name -> (angle lift of the first factor as text and as a python function,
#          odd component, expected pair)
CASES = {
    "basic": ("x1", lambda t: t, "xi1", (1, 1)),
    "double_wrap": ("2*x1", lambda t: 2 * t, "2*xi1", (2, 2)),
    "avoiding": ("1 + 0.5*sin(x1)", lambda t: 1 + 0.5 * math.sin(t), "0.5*cos(x1)*xi1", (0, 0)),
    "cancellation": ("sin(x1)", math.sin, "cos(x1)*xi1", (0, 0)),
    "reversed": ("-x1", lambda t: -t, "-xi1", (-1, -1)),
}


def circle_map(name: str, odd: str | None = None):
    text, _, odd_default, _ = CASES[name]
    return angle_lift_morphism(S1, T2, [text, "0.5"], [odd or odd_default, "0"], name=name)


def homotopy(lift: str, odd: str, name: str):
    """Morphism on S1 x R whose second even coordinate is the homotopy time."""
    X = product_model(S1, line_model(box=(-0.25, 1.25)), name="S1xR")
    return angle_lift_morphism(X, T2, [lift, "0.5"], [odd, "0"], name=name)


ROTATING = ("x1 + pi*x2", "xi1")
SLIDING_OFF = ("sin(x1) + 2*x2", "cos(x1)*xi1")


def positive_frame_change(rng, k: int) -> np.ndarray:
    M = rng.normal(size=(k, k))
    if np.linalg.det(M) < 0:
        M[:, 0] *= -1
    return M
