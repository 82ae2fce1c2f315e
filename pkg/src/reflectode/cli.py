"""Command line interface: ``reflectode {solve,green,positivity,verify}``.

Exit codes: 0 success, 1 failed verification or other runtime failure,
2 invalid input (schema, expression syntax, arguments), 3 resonance or
domain/orientation error, 4 quadrature non-convergence.
"""

import argparse
import json
import logging
import math
import os
import sys

import jsonschema
import numpy as np

from . import expr as _expr
from . import kernel as K
from ._errors import (
    DomainError,
    ExprSyntaxError,
    QuadratureError,
    ReflectODEError,
    ResonanceError,
)
from .functional import Measure
from .positivity import certify_positive, empirical_threshold
from .quad import QuadConfig
from .solver import Antiperiodic, Functional, Lambda, Periodic, ProblemSpec, solve
from .verify import boundary_residual, kernel_axiom_suite, residual

log = logging.getLogger("reflectode")

EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_RESONANCE = 3
EXIT_QUADRATURE = 4

_NUMBER = {"type": "number"}
MEASURE_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "density": {"type": ["string", "null"]},
        "atoms": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["t", "a"],
                "properties": {"t": _NUMBER, "a": _NUMBER},
            },
        },
    },
}
PROBLEM_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["m", "T", "h", "bc"],
    "properties": {
        "m": _NUMBER,
        "T": {"type": "number", "exclusiveMinimum": 0},
        "h": {"type": "string"},
        "bc": {
            "type": "object",
            "additionalProperties": False,
            "required": ["type"],
            "properties": {
                "type": {"enum": ["periodic", "antiperiodic", "lambda", "functional"]},
                "lambda": _NUMBER,
                "F": MEASURE_SCHEMA,
                "c": _NUMBER,
            },
            "allOf": [
                {"if": {"properties": {"type": {"const": "lambda"}}},
                 "then": {"required": ["lambda"]}},
                {"if": {"properties": {"type": {"const": "functional"}}},
                 "then": {"required": ["F", "c"]}},
            ],
        },
        "quad": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "abs_tol": {"type": "number", "exclusiveMinimum": 0},
                "rel_tol": {"type": "number", "exclusiveMinimum": 0},
                "max_depth": {"type": "integer", "minimum": 1},
            },
        },
    },
}

# Values reported for the worked example x' + x(-t) = e^t on [-1/2, 1/2]
# with F(x) = int x; kept for comparison, never asserted.
PUBLISHED_EXAMPLE = {"k2": 4.91464, "positivity_threshold": 0.850502}


class InputError(ReflectODEError):
    pass


def _load_problem(args):
    try:
        with open(args.problem, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read problem file {args.problem!r}: {exc}") from None
    try:
        jsonschema.validate(doc, PROBLEM_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InputError(f"problem file schema error at {where}: {exc.message}") from None
    for key in ("m", "T"):
        override = getattr(args, key, None)
        if override is not None:
            doc[key] = override
    bc_doc = doc["bc"]
    if getattr(args, "lam", None) is not None:
        bc_doc["lambda"] = args.lam
    if getattr(args, "c", None) is not None:
        bc_doc["c"] = args.c
    quad = doc.get("quad", {})
    cfg = QuadConfig(
        abs_tol=args.abs_tol if args.abs_tol is not None else quad.get("abs_tol", 1e-10),
        rel_tol=args.rel_tol if args.rel_tol is not None else quad.get("rel_tol", 1e-10),
        max_depth=quad.get("max_depth", 50),
    )
    kind = bc_doc["type"]
    if kind == "periodic":
        bc = Periodic()
    elif kind == "antiperiodic":
        bc = Antiperiodic()
    elif kind == "lambda":
        bc = Lambda(float(bc_doc["lambda"]))
    else:
        bc = Functional(Measure.from_json(bc_doc["F"]), float(bc_doc["c"]))
    return ProblemSpec(doc["m"], doc["T"], doc["h"], bc), cfg


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _write(path, text):
    fh, close = _open_out(path)
    try:
        fh.write(text)
    finally:
        if close:
            fh.close()


def _dump_json(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _fmt(x):
    return f"{x:.17g}"


def cmd_solve(args):
    spec, cfg = _load_problem(args)
    sol = solve(spec, cfg)
    n = args.grid
    T = spec.T
    t = np.array([-T + 2.0 * T * i / n for i in range(n + 1)])
    u = sol.evaluate(t)
    lines = ["t,u"] + [f"{_fmt(ti)},{_fmt(ui)}" for ti, ui in zip(t, u)]
    _write(args.out, "\n".join(lines) + "\n")
    res = residual(sol.evaluate, spec.forcing, spec.m, T)
    bres = boundary_residual(sol.evaluate, spec.bc, T, cfg)
    print(f"residual max|u'(t) + m u(-t) - h(t)| = {res:.3e}", file=sys.stderr)
    print(f"boundary residual = {bres:.3e}", file=sys.stderr)
    if sol.lambda_used is not None:
        print(f"lambda = {_fmt(sol.lambda_used)}", file=sys.stderr)
    return 0


def green_lattice(T, n):
    """t on the n-step lattice of I; s offset by half a step so no point is diagonal.

    The last s node would fall outside I and is placed at ``T - T/(2n)``.
    """
    t = np.array([-T + 2.0 * T * i / n for i in range(n + 1)])
    s = np.array([-T + T * (2 * j + 1) / n for j in range(n)] + [T - T / (2.0 * n)])
    return t, s


def cmd_green(args):
    p = K.KernelParams(args.m, args.T)
    evaluator = {"gbar": K.gbar, "hbar": K.hbar, "h": K.h_kernel}[args.kind]
    t, s = green_lattice(p.T, args.grid)
    tt, ss = np.meshgrid(t, s, indexing="ij")
    vals = evaluator(tt, ss, p)
    lines = ["t,s,value"]
    for ti, si, vi in zip(tt.ravel(), ss.ravel(), vals.ravel()):
        lines.append(f"{_fmt(ti)},{_fmt(si)},{_fmt(vi)}")
    _write(args.out, "\n".join(lines) + "\n")
    return 0


def _is_published_example(spec):
    return (
        spec.m == 1.0 and spec.T == 0.5
        and spec.h == _expr.parse("exp(t)")
        and isinstance(spec.bc, Functional) and spec.bc.F.is_lebesgue
    )


def cmd_positivity(args):
    spec, cfg = _load_problem(args)
    if not isinstance(spec.bc, Functional):
        raise InputError("positivity needs bc.type = 'functional'")
    report = certify_positive(spec, cfg)
    if args.threshold:
        report.empirical_threshold = empirical_threshold(spec, cfg)
    out = {"computed": report.to_json()}
    if _is_published_example(spec):
        out["published"] = dict(PUBLISHED_EXAMPLE)
    _write(args.out, _dump_json(out))
    return 0


def cmd_verify(args):
    p = K.KernelParams(args.m, args.T)
    rep = kernel_axiom_suite(args.kind, p)
    _write(args.out, _dump_json(rep.to_json()))
    print(rep.to_table(), file=sys.stderr)
    return 0 if rep.passed else EXIT_FAILED


def _finite(text):
    val = float(text)
    if not math.isfinite(val):
        raise argparse.ArgumentTypeError(f"{text!r} is not finite")
    return val


def _positive_int(text):
    val = int(text)
    if val < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return val


def build_parser():
    parser = argparse.ArgumentParser(
        prog="reflectode",
        description="Solve x'(t) + m x(-t) = h(t) on [-T, T] with Green's functions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def problem_args(p):
        p.add_argument("--problem", required=True, help="JSON problem file")
        p.add_argument("--out", default="-", help="output path (default: stdout)")
        p.add_argument("--abs-tol", type=_finite, default=None)
        p.add_argument("--rel-tol", type=_finite, default=None)
        p.add_argument("--m", type=_finite, default=None, help="override m")
        p.add_argument("--T", type=_finite, default=None, help="override T")
        p.add_argument("--c", type=_finite, default=None, help="override bc.c")
        p.add_argument("--lambda", dest="lam", type=_finite, default=None, help="override bc.lambda")

    p = sub.add_parser("solve", help="solve a problem file and write t,u CSV")
    problem_args(p)
    p.add_argument("--grid", type=_positive_int, default=100, help="number of grid steps")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("green", help="write a Green's function surface as t,s,value CSV")
    p.add_argument("--kind", choices=["gbar", "hbar", "h"], required=True)
    p.add_argument("--m", type=_finite, required=True)
    p.add_argument("--T", type=_finite, required=True)
    p.add_argument("--grid", type=_positive_int, default=50)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_green)

    p = sub.add_parser("positivity", help="positivity constants and certificate as JSON")
    problem_args(p)
    p.add_argument("--threshold", action="store_true", help="also search the smallest positive c")
    p.set_defaults(func=cmd_positivity)

    p = sub.add_parser("verify", help="run the kernel property suite")
    p.add_argument("--kind", choices=["periodic", "antiperiodic"], required=True)
    p.add_argument("--m", type=_finite, required=True)
    p.add_argument("--T", type=_finite, required=True)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_verify)
    return parser


def _configure_logging():
    level = os.environ.get("REFLECTODE_LOG", "warn").lower()
    levels = {"error": logging.ERROR, "warn": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(stream=sys.stderr, level=levels.get(level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv=None):
    _configure_logging()
    args = build_parser().parse_args(argv)
    log.debug("running %s", args.command)
    try:
        return args.func(args)
    except (InputError, ExprSyntaxError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ResonanceError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESONANCE
    except QuadratureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_QUADRATURE
    except ReflectODEError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
