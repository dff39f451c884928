"""Named built-in models and the ``pi-grassmannian:k,m`` / ``grassmannian:k,l,m,n`` specs."""

from __future__ import annotations

from functools import lru_cache

from ..errors import ModelError
from .builders import product_model, twisted_circle
from .model import SuperManifoldModel


def _s1() -> SuperManifoldModel:
    return twisted_circle("S1_trivial", 1, 1, pi=True,
                          description="circle with trivial odd line bundle (1|1)")


def _n11() -> SuperManifoldModel:
    return twisted_circle("N11", 1, 1, flip_odd=(1,),
                          description="circle whose odd line bundle is the Moebius bundle (1|1)")


def _k21() -> SuperManifoldModel:
    return twisted_circle("K21", 2, 1, flip_even=(2,),
                          description="Moebius strip body with trivial odd line (2|1)")


def _s21() -> SuperManifoldModel:
    return twisted_circle("S21", 2, 1, flip_even=(2,), flip_odd=(1,),
                          description="Moebius strip body, odd line twisted along with the fibre (2|1)")


def _c32() -> SuperManifoldModel:
    return product_model(_n11(), _k21(), "C32",
                         description="product of N11 and K21 (3|2)")


def _t2() -> SuperManifoldModel:
    s = _s1()
    return product_model(s, s, "T2_pi", pi=True,
                         description="torus with trivial odd bundle and identity pairing (2|2)")


_BUILTINS = {
    "S1_trivial": _s1,
    "N11": _n11,
    "K21": _k21,
    "S21": _s21,
    "C32": _c32,
    "T2_pi": _t2,
}


def builtin_names() -> list[str]:
    return list(_BUILTINS)


def _ints(spec: str, count: int) -> list[int]:
    try:
        vals = [int(v) for v in spec.split(",")]
    except ValueError:
        vals = []
    if len(vals) != count:
        raise ModelError(f"expected {count} comma-separated integers, got {spec!r}")
    return vals


@lru_cache(maxsize=32)
def get_model(name: str) -> SuperManifoldModel:
    """Look up a built-in model or build a Grassmannian from a name like ``pi-grassmannian:1,3``."""
    if name in _BUILTINS:
        return _BUILTINS[name]()
    from .. import pigrass
    if name.startswith("pi-grassmannian:"):
        k, m = _ints(name.split(":", 1)[1], 2)
        return pigrass.build_pi_grassmannian(k, m)
    if name.startswith("grassmannian:"):
        k, l, m, n = _ints(name.split(":", 1)[1], 4)
        return pigrass.build_supergrassmannian(k, l, m, n)
    raise ModelError(f"unknown model {name!r}", known=builtin_names())


def registry() -> dict[str, SuperManifoldModel]:
    """All built-in models by name."""
    return {name: get_model(name) for name in _BUILTINS}
