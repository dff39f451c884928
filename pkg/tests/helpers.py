"""Model surgery used by invariance tests."""

from __future__ import annotations

import dataclasses

import numpy as np

from supergeo.atlas import Overlap, SuperMap
from supergeo.superexpr import parse


def recoordinatize(model, chart_id: str, forward, inverse):
    """Change coordinates on one chart: ``y = forward(x)``, ``x = inverse(y)`` (component texts)."""
    c = model.chart(chart_id)
    phi = SuperMap(c.coords, [parse(t, c.coords) for t in forward], model.m)
    phi_inv = SuperMap(c.coords, [parse(t, c.coords) for t in inverse], model.m)
    body_inv = {i: phi_inv.forms[i].body for i in range(model.m)}
    trans = []
    for t in model.transitions:
        smap, overlaps = t.map, list(t.overlaps)
        if t.target == chart_id:
            smap = phi.after(smap)
        if t.source == chart_id:
            smap = smap.after(phi_inv)
            overlaps = [Overlap(o.predicate.substitute(body_inv), phi.body(o.samples.T).T) for o in overlaps]
        trans.append(dataclasses.replace(t, map=smap, overlaps=tuple(overlaps)))
    charts = tuple(dataclasses.replace(ch, domain=ch.domain.substitute(body_inv), box=None)
                   if ch.id == chart_id else ch for ch in model.charts)
    return dataclasses.replace(model, charts=charts, transitions=tuple(trans))


def relabel(model, mapping: dict):
    charts = tuple(dataclasses.replace(c, id=mapping.get(c.id, c.id)) for c in model.charts)
    trans = tuple(dataclasses.replace(t, source=mapping.get(t.source, t.source),
                                      target=mapping.get(t.target, t.target)) for t in model.transitions)
    pi = model.pi_structure
    if pi is not None:
        pi = dataclasses.replace(pi, pairing={mapping.get(k, k): v for k, v in pi.pairing.items()})
    return dataclasses.replace(model, charts=tuple(reversed(charts)), transitions=trans, pi_structure=pi)


def with_extra_sample(model):
    """Repeat the midpoint of the first overlap's first two samples as a further sample."""
    trans = list(model.transitions)
    t = trans[0]
    o = t.overlaps[0]
    extra = o.samples[:2].mean(axis=0) if len(o.samples) > 1 else o.samples[0]
    assert o.contains(extra)
    o2 = Overlap(o.predicate, np.vstack([o.samples, extra]))
    trans[0] = dataclasses.replace(t, overlaps=(o2,) + t.overlaps[1:])
    return dataclasses.replace(model, transitions=tuple(trans))
