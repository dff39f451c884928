"""JSON (de)serialization of models, morphisms and submanifolds, with schema checks."""

from __future__ import annotations

import json
import math
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from .atlas.model import Chart, Overlap, PiStructure, SuperManifoldModel, TransitionMap
from .atlas.morphism import MorphismModel, MorphismPiece, angle_lift_morphism
from .atlas.registry import get_model
from .atlas.supermap import SuperMap
from .errors import ModelError, SuperGeoError
from .intersection.submanifold import Slice, SubmanifoldModel
from .superexpr import CoordinateSystem
from .superexpr.predicate import parse_predicate


class SchemaError(SuperGeoError):
    """Input JSON violates a shipped schema; ``context['pointer']`` locates the offending value."""


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files("supergeo.schemas").joinpath(f"{name}.schema.json").read_text()
    return json.loads(text)


def _pointer(path) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in path)


def check_schema(doc, name: str) -> None:
    validator = jsonschema.Draft202012Validator(load_schema(name))
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        raise SchemaError(f"{name} schema violation: {e.message}", pointer=_pointer(e.absolute_path),
                          schema=name)


def read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}", path=str(path)) from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc.msg}", path=str(path),
                          line=exc.lineno, column=exc.colno) from None


# deterministic output ------------------------------------------------------

def _enc(obj) -> str:
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if not math.isfinite(v):
            return "null"
        return format(v, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = sorted((str(k), v) for k, v in obj.items())
        return "{" + ", ".join(f"{json.dumps(k)}: {_enc(v)}" for k, v in items) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_enc(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    """JSON text with sorted keys and floats at 17 significant digits."""
    return _enc(obj)


# models --------------------------------------------------------------------

def model_to_json(model: SuperManifoldModel) -> dict:
    charts = []
    for c in model.charts:
        d = {"id": c.id, "coords": {"even": list(c.coords.even_names), "odd": list(c.coords.odd_names)},
             "domain": c.domain.to_string(c.coords)}
        if c.box is not None:
            d["box"] = [list(b) for b in c.box]
        charts.append(d)
    trans = []
    for t in model.transitions:
        coords = model.chart(t.source).coords
        trans.append({"from": t.source, "to": t.target, "components": t.map.texts(),
                      "overlaps": [{"predicate": o.predicate.to_string(coords),
                                    "samples": o.samples.tolist()} for o in t.overlaps]})
    out = {"name": model.name, "dim": {"even": model.m, "odd": model.n}, "charts": charts,
           "transitions": trans, "compact_body": model.compact_body}
    if model.description:
        out["description"] = model.description
    if model.pi_structure is not None:
        out["pi_structure"] = {c: [j + 1 for j in p] for c, p in model.pi_structure.pairing.items()}
    return out


def model_from_json(doc: dict) -> SuperManifoldModel:
    check_schema(doc, "model")
    m, n = doc["dim"]["even"], doc["dim"]["odd"]
    charts = []
    for i, c in enumerate(doc["charts"]):
        try:
            coords = CoordinateSystem(tuple(c["coords"]["even"]), tuple(c["coords"]["odd"]))
        except ValueError as exc:
            raise ModelError(str(exc), pointer=f"/charts/{i}/coords") from None
        box = tuple(tuple(b) for b in c["box"]) if "box" in c else None
        charts.append(Chart(c["id"], coords, parse_predicate(c["domain"], coords), box))
    by_id = {c.id: c for c in charts}
    trans = []
    for i, t in enumerate(doc["transitions"]):
        if t["from"] not in by_id or t["to"] not in by_id:
            raise ModelError("transition references an unknown chart", pointer=f"/transitions/{i}")
        coords = by_id[t["from"]].coords
        smap = SuperMap.from_strings(coords, t["components"], m)
        overlaps = tuple(Overlap(parse_predicate(o["predicate"], coords), np.array(o["samples"], dtype=float))
                         for o in t["overlaps"])
        trans.append(TransitionMap(t["from"], t["to"], smap, overlaps))
    pi = None
    if "pi_structure" in doc:
        pi = PiStructure({c: tuple(j - 1 for j in p) for c, p in doc["pi_structure"].items()})
    return SuperManifoldModel(doc["name"], m, n, tuple(charts), tuple(trans), doc["compact_body"], pi,
                              doc.get("description", ""), dict(doc.get("metadata", {})))


def resolve_model(ref) -> SuperManifoldModel:
    """A registry/generated name, a path to a model file, or an inline model object."""
    if isinstance(ref, dict):
        return model_from_json(ref)
    if isinstance(ref, str) and (ref.endswith(".json") or Path(ref).is_file()):
        return model_from_json(read_json(ref))
    return get_model(ref)


# morphisms and submanifolds ------------------------------------------------

def morphism_from_json(doc: dict) -> MorphismModel:
    X, Y = resolve_model(doc["source"]), resolve_model(doc["target"])
    name = doc.get("name", "f")
    if "lifts" in doc:
        return angle_lift_morphism(X, Y, doc["lifts"], doc["odd"], name=name)
    pieces = []
    for p in doc["pieces"]:
        coords = X.chart(p["source_chart"]).coords
        smap = SuperMap.from_strings(coords, p["components"], Y.m)
        pieces.append(MorphismPiece(p["source_chart"], p["target_chart"], smap,
                                    parse_predicate(p["predicate"], coords),
                                    np.array(p.get("samples", []), dtype=float)))
    return MorphismModel(X, Y, tuple(pieces), name)


def submanifold_from_json(doc: dict, ambient: SuperManifoldModel) -> SubmanifoldModel:
    slices = {}
    for cid, s in doc["carriers"].items():
        ze = tuple(i - 1 for i in s["zero_even"])
        zo = tuple(j - 1 for j in s["zero_odd"])
        ef = tuple(i - 1 for i in s["even_frame"]) if "even_frame" in s else \
            tuple(i for i in range(ambient.m) if i not in ze)
        of = tuple(j - 1 for j in s["odd_frame"]) if "odd_frame" in s else \
            tuple(j for j in range(ambient.n) if j not in zo)
        slices[cid] = Slice(ze, zo, ef, of, s.get("even_sign", 1), s.get("odd_sign", 1))
    return SubmanifoldModel(ambient, slices, doc.get("name", "Z"), doc.get("closed", True))
