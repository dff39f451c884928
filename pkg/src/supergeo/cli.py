"""Command-line front end: ``supergeo <command> ...``.

Every command writes one JSON document (sorted keys, 17-digit floats) to
stdout or ``--out``.  Exit codes: 0 success, 1 a check failed or a
computation hit a degeneracy, 2 bad usage or input.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import io
from .atlas.registry import builtin_names, get_model
from .atlas.validate import DEFAULT_TOL, validate_model
from .errors import DimensionError, ModelError, ParseError, SuperGeoError
from .intersection import euler_report, intersection_pair
from .orientation import SIGN_TOL, classify
from .pigrass import build_pi_grassmannian, build_supergrassmannian, standard_morse_field

USAGE_ERRORS = (ModelError, ParseError, DimensionError, io.SchemaError)


class UsageError(SuperGeoError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message, usage=self.format_usage().strip())


def _positive(kind):
    def conv(text):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
        if v <= 0:
            raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
        return v
    return conv


def _density(text):
    v = _positive(int)(text)
    if v < 2:
        raise argparse.ArgumentTypeError("grid density must be at least 2")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    p = _Parser(prog="supergeo", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, text):
        return sub.add_parser(name, help=text, parents=[common])

    add("registry", "list built-in models")

    def tolerances(sp):
        sp.add_argument("--newton-tol", type=_positive(float), default=None)
        sp.add_argument("--sign-tol", type=_positive(float), default=None)
        sp.add_argument("--cocycle-tol", type=_positive(float), default=None)
        sp.add_argument("--grid-density", type=_density, default=None)

    v = add("validate", "check parity, inverses and cocycles of an atlas")
    v.add_argument("--model", required=True, help="registry name, generated name or model file")
    tolerances(v)

    c = add("classify", "orienting cover and orientability class")
    c.add_argument("--model", required=True)
    tolerances(c)

    i = add("intersect", "oriented intersection pair of a morphism with a submanifold")
    i.add_argument("job", help="job file {morphism, submanifold, tolerances}")
    tolerances(i)

    e = add("euler", "Euler pair of a pi-symmetric model")
    e.add_argument("job", nargs="?", help="job file {model, vector_field}")
    e.add_argument("--model", help="model name; the standard Morse field is used for pi-Grassmannians")
    tolerances(e)

    g = add("grassmannian", "generate a super Grassmannian atlas")
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--l", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--pi", action="store_true", help="build the pi-symmetric variant (needs k = l, m = n)")
    g.add_argument("--seed", type=int, default=20240611, help="seed for overlap samples")
    g.add_argument("--emit", help="also write the model JSON to this file")
    return p


def _tol(args, job: dict, key: str, default: float) -> float:
    cli = getattr(args, key, None)
    if cli is not None:
        return cli
    return float(job.get("tolerances", {}).get(key, default))


def _density_of(args, job: dict) -> int:
    return args.grid_density or int(job.get("grid_density", 64))


def cmd_registry(args) -> tuple[int, dict]:
    models = {}
    for name in builtin_names():
        mdl = get_model(name)
        models[name] = {"dim": mdl.dim, "charts": len(mdl.charts), "compact_body": mdl.compact_body,
                        "pi": mdl.pi_structure is not None, "description": mdl.description}
    return 0, {"models": models, "generated": ["grassmannian:k,l,m,n", "pi-grassmannian:k,m"]}


def cmd_validate(args) -> tuple[int, dict]:
    model = io.resolve_model(args.model)
    rep = validate_model(model, _tol(args, {}, "cocycle_tol", DEFAULT_TOL))
    return (0 if rep.ok else 1), rep.to_dict()


def cmd_classify(args) -> tuple[int, dict]:
    model = io.resolve_model(args.model)
    out = classify(model, _tol(args, {}, "sign_tol", SIGN_TOL)).to_dict()
    out["model"] = model.name
    return 0, out


def cmd_intersect(args) -> tuple[int, dict]:
    job = io.read_json(args.job)
    io.check_schema(job, "intersect-job")
    f = io.morphism_from_json(job["morphism"])
    Z = io.submanifold_from_json(job["submanifold"], f.target)
    rep = intersection_pair(f, Z, _density_of(args, job), _tol(args, job, "newton_tol", 1e-10),
                            _tol(args, job, "sign_tol", SIGN_TOL))
    return 0, rep.to_dict()


def _default_field(model):
    meta = model.metadata
    if meta.get("pi") and meta.get("k") == 1:
        return standard_morse_field(meta["m"])
    raise ModelError("no vector field given and no standard field is known for this model",
                     model=model.name)


def cmd_euler(args) -> tuple[int, dict]:
    if bool(args.job) == bool(args.model):
        raise UsageError("give either a job file or --model")
    job = {"model": args.model}
    if args.job:
        job = io.read_json(args.job)
        io.check_schema(job, "euler-job")
    model = io.resolve_model(job["model"])
    vf = job.get("vector_field") or _default_field(model)
    rep = euler_report(model, vf, _density_of(args, job), _tol(args, job, "newton_tol", 1e-10),
                       _tol(args, job, "sign_tol", SIGN_TOL))
    return 0, rep.to_dict()


def cmd_grassmannian(args) -> tuple[int, dict]:
    if args.pi:
        if (args.k, args.m) != (args.l, args.n):
            raise UsageError("--pi needs k = l and m = n")
        model = build_pi_grassmannian(args.k, args.m, seed=args.seed)
    else:
        model = build_supergrassmannian(args.k, args.l, args.m, args.n, seed=args.seed)
    doc = io.model_to_json(model)
    if args.emit:
        Path(args.emit).write_text(io.dumps(doc) + "\n")
    return 0, doc


COMMANDS = {"registry": cmd_registry, "validate": cmd_validate, "classify": cmd_classify,
            "intersect": cmd_intersect, "euler": cmd_euler, "grassmannian": cmd_grassmannian}


def _error(exc: BaseException) -> dict:
    ctx = dict(getattr(exc, "context", {}) or {})
    ctx.setdefault("type", type(exc).__name__)
    return {"error": str(exc), "context": ctx}


def _emit(doc: dict, out: str | None) -> None:
    text = io.dumps(doc) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    out = None
    try:
        args = build_parser().parse_args(argv)
        out = args.out
        if args.verbose:
            logging.basicConfig(level=logging.INFO, stream=sys.stderr, format="%(name)s: %(message)s")
        code, doc = COMMANDS[args.command](args)
    except (UsageError, *USAGE_ERRORS) as exc:
        code, doc = 2, _error(exc)
    except SuperGeoError as exc:
        code, doc = 1, _error(exc)
    except Exception as exc:      # last resort: still answer in JSON
        code, doc = 1, _error(exc)
    try:
        _emit(doc, out)
    except OSError as exc:
        sys.stdout.write(io.dumps(_error(exc)) + "\n")
        return 2
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
