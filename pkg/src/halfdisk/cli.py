"""Command-line front end: JSON problem files in, JSON reports out.

Subcommands mirror the library surface: index, tangency, compare, perturb,
smooth-cusp, adjunction, maslov, reflect.  Problem files carry a version
stamp "halfdisk/1" and a kind-specific payload validated against the shipped
schemas.  Exit codes: 0 success, 2 precondition/validation failure, 1
internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources

import numpy as np

VERSION = "halfdisk/1"
KINDS = ("index", "tangency", "compare", "perturb", "smooth-cusp",
         "adjunction", "maslov", "reflect")


class CliError(Exception):
    def __init__(self, message: str, code: int = 2):
        super().__init__(message)
        self.code = code


def load_schema(kind: str) -> dict:
    fname = f"{kind}.json"
    with resources.files("halfdisk.schemas").joinpath(fname).open() as fh:
        return json.load(fh)


def validate_problem(doc: dict, kind: str | None = None) -> dict:
    import jsonschema
    envelope = load_schema("problem")
    try:
        jsonschema.validate(doc, envelope)
    except jsonschema.ValidationError as exc:
        path = "/" + "/".join(str(p) for p in exc.absolute_path)
        raise CliError(f"schema violation at {path}: {exc.message}")
    if kind is not None and doc["kind"] != kind:
        raise CliError(f"problem kind {doc['kind']!r} does not match "
                       f"subcommand {kind!r}")
    payload_schema = load_schema(doc["kind"])
    try:
        jsonschema.validate(doc["payload"], payload_schema)
    except jsonschema.ValidationError as exc:
        path = "/payload/" + "/".join(str(p) for p in exc.absolute_path)
        raise CliError(f"schema violation at {path}: {exc.message}")
    return doc


def normalize_problem(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def emit(report: dict, pretty: bool) -> None:
    if pretty:
        for k, v in report.items():
            print(f"{k}: {v}")
    else:
        print(json.dumps(report, sort_keys=True))


def _series_from_payload(data: dict, exact: bool):
    from .series import TruncatedSeries
    return TruncatedSeries.from_json(data, exact=exact)


def _halfdisk_from_payload(data: dict, exact: bool, structure=None):
    from .normal_form import HalfDiskMap
    return HalfDiskMap(series=_series_from_payload(data, exact),
                       structure=structure)


def _load_problem(path: str, kind: str) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read problem file: {exc}")
    return validate_problem(doc, kind)


def cmd_index(args) -> dict:
    from .intersection import boundary_index_linking, boundary_index_series
    doc = _load_problem(args.problem, "index")
    p = doc["payload"]
    exact = p.get("exact", True)
    u1 = _halfdisk_from_payload(p["u1"], exact)
    u2 = _halfdisk_from_payload(p["u2"], exact)
    report = {}
    if args.method in ("series", "both"):
        rs = boundary_index_series(u1, u2)
        report.update(rs.to_json())
    if args.method in ("linking", "both"):
        rl = boundary_index_linking(u1, u2, r=args.radius,
                                    samples=args.samples)
        if args.method == "linking":
            report.update(rl.to_json())
        else:
            report["linking_index"] = rl.index
            report["linking_residual"] = rl.residual
            report["sphere_radius"] = rl.sphere_radius
            report["agree"] = (rl.index == report["index"])
    return report


def cmd_tangency(args) -> dict:
    from .normal_form import tangency_order
    doc = _load_problem(args.problem, "tangency")
    p = doc["payload"]
    exact = p.get("exact", True)
    r = tangency_order(_halfdisk_from_payload(p["u1"], exact),
                       _halfdisk_from_payload(p["u2"], exact))
    return {"d": r.d, "kind": r.kind, "infinite": r.infinite,
            "transverse": r.transverse}


def cmd_compare(args) -> dict:
    from .comparison import compare
    doc = _load_problem(args.problem, "compare")
    p = doc["payload"]
    exact = p.get("exact", True)
    r = compare(_halfdisk_from_payload(p["u1"], exact),
                _halfdisk_from_payload(p["u2"], exact))
    return {"kind": r.kind, "nu": r.nu,
            "psi": r.psi.truncate(min(r.psi.order, args.truncation)).to_json(),
            "w0": [complex(x).real for x in r.w0]}


def cmd_perturb(args) -> dict:
    from .solver import SolveConfig, solve_perturbation
    from .structures import structure_from_json
    doc = _load_problem(args.problem, "perturb")
    p = doc["payload"]
    u0 = _halfdisk_from_payload(p["u0"], exact=False)
    J = structure_from_json(p.get("structure", {"name": "standard"}))
    cfg = SolveConfig(nu=p["nu"], w0=tuple(p["w0"]), N=args.grid,
                      tol=args.tol, max_iter=args.max_iter)
    res = solve_perturbation(u0, cfg, J)
    report = {
        "nu": res.nu, "scale": res.scale, "iterations": res.iterations,
        "fixed_point_residual": res.fixed_point_residual,
        "dbar_residual": res.dbar_residual,
        "dbar_residual_seam": res.dbar_residual_seam,
        "dbar_residual_l2": res.dbar_residual_l2,
        "reality_defect": res.reality_defect,
        "w0": list(map(float, res.w0)),
        "w_origin": list(map(float, res.w_at_origin())),
    }
    if args.dump:
        with open(args.dump, "w") as fh:
            json.dump(res.w.to_json(), fh)
        report["dump"] = args.dump
    return report


def cmd_smooth_cusp(args) -> dict:
    from .solver import SolveConfig, smooth_cusp
    from .structures import structure_from_json
    doc = _load_problem(args.problem, "smooth-cusp")
    p = doc["payload"]
    u0 = _halfdisk_from_payload(p["u0"], exact=False)
    J = structure_from_json(p.get("structure", {"name": "standard"}))
    cfg = SolveConfig(nu=1, w0=(0.0, p["a"]), N=args.grid, tol=args.tol,
                      max_iter=args.max_iter)
    res = smooth_cusp(u0, a=p["a"], cfg=cfg, J=J)
    return {"radius": res.radius, "min_du": res.min_du,
            "sigma": res.sigma, "c1": res.c1,
            "iterations": res.solve.iterations,
            "dbar_residual": res.solve.dbar_residual}


def cmd_adjunction(args) -> dict:
    from .adjunction import CurveConfig, check_adjunction
    doc = _load_problem(args.problem, "adjunction")
    p = doc["payload"]
    cfg = CurveConfig(g=p["g"], sigma=p["sigma"],
                      delta_b=p.get("delta_b", 0),
                      delta_i=p.get("delta_i", 0),
                      kappa_i=p.get("kappa_i", 0),
                      normal_maslov=p["normal_maslov"],
                      double_sq=p["double_sq"])
    if "maslov_total" in p and p["maslov_total"] != cfg.maslov_total:
        raise CliError(
            f"maslov_total {p['maslov_total']} violates the additivity "
            f"invariant normal + 4 - 4g - 2*sigma = {cfg.maslov_total}")
    v = check_adjunction(cfg)
    out = v.to_json()
    out["maslov_total"] = cfg.maslov_total
    out["double_consistent"] = cfg.double_consistent()
    return out


def cmd_maslov(args) -> dict:
    from .adjunction import (SectionZeroData, maslov_from_zeros,
                             maslov_tangent)
    if args.tangent:
        if args.genus is None or args.sigma is None:
            raise CliError("--tangent needs -g and -s")
        return {"maslov": maslov_tangent(args.genus, args.sigma)}
    if not args.problem:
        raise CliError("provide a problem file or --tangent -g G -s S")
    doc = _load_problem(args.problem, "maslov")
    p = doc["payload"]
    if "tangent" in p:
        return {"maslov": maslov_tangent(p["tangent"]["g"],
                                         p["tangent"]["sigma"])}
    z = SectionZeroData(tuple(p["zeros"]["interior"]),
                        tuple(p["zeros"]["boundary"]))
    return {"maslov": maslov_from_zeros(z)}


def cmd_reflect(args) -> dict:
    from .structures import (blend_cones, minus_structure, reflect_structure,
                             structure_from_json)
    doc = _load_problem(args.problem, "reflect")
    p = doc["payload"]
    J = structure_from_json(p["structure"])
    op = p.get("operation", "reflect")
    if op == "reflect":
        out = reflect_structure(J)
    elif op == "minus":
        out = minus_structure(J)
    elif op == "blend":
        out = blend_cones(J, p.get("cone_constant", 1.0))
    else:
        raise CliError(f"unknown operation {op!r}")
    samples = p.get("samples", [])
    mats = []
    for s in samples:
        if out.domain == "disk":
            point = complex(s[0], s[1])
        else:
            point = np.array([complex(s[0], s[1]), complex(s[2], s[3])])
        mats.append([[round(x, 12) for x in row] for row in out(point)])
    return {"operation": op, "name": out.name, "matrices": mats}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="halfdisk",
                                 description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int,
                    default=int(os.environ.get("HALFDISK_SEED", "0")))
    ap.add_argument("--json", dest="pretty", action="store_false",
                    default=False)
    ap.add_argument("--pretty", dest="pretty", action="store_true")
    ap.add_argument("--emit-input", action="store_true",
                    help="echo the normalized problem file and exit")
    ap.add_argument("--threads", type=int, default=1,
                    help="worker threads for the linking integral")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, with_problem=True):
        if with_problem:
            p.add_argument("problem")
        p.add_argument("--truncation", type=int, default=32)
        return p

    pi = common(sub.add_parser("index"))
    pi.add_argument("--method", choices=("series", "linking", "both"),
                    default="series")
    pi.add_argument("--radius", type=float, default=None)
    pi.add_argument("--samples", type=int, default=512)
    pi.set_defaults(fn=cmd_index)

    common(sub.add_parser("tangency")).set_defaults(fn=cmd_tangency)
    common(sub.add_parser("compare")).set_defaults(fn=cmd_compare)

    pp = common(sub.add_parser("perturb"))
    pp.add_argument("--grid", type=int, default=64)
    pp.add_argument("--tol", type=float, default=1e-10)
    pp.add_argument("--max-iter", type=int, default=60)
    pp.add_argument("--dump", default=None)
    pp.set_defaults(fn=cmd_perturb)

    ps = common(sub.add_parser("smooth-cusp"))
    ps.add_argument("--grid", type=int, default=48)
    ps.add_argument("--tol", type=float, default=1e-10)
    ps.add_argument("--max-iter", type=int, default=60)
    ps.set_defaults(fn=cmd_smooth_cusp)

    common(sub.add_parser("adjunction")).set_defaults(fn=cmd_adjunction)

    pm = sub.add_parser("maslov")
    pm.add_argument("problem", nargs="?")
    pm.add_argument("--tangent", action="store_true")
    pm.add_argument("-g", "--genus", type=int, default=None)
    pm.add_argument("-s", "--sigma", type=int, default=None)
    pm.set_defaults(fn=cmd_maslov)

    common(sub.add_parser("reflect")).set_defaults(fn=cmd_reflect)
    return ap


def main(argv=None) -> int:
    from .adjunction import InconsistentConfig
    from .cauchy import ContractionError
    from .comparison import ContactBeyondTruncation
    from .intersection import CurvesCoincide, LinkingPreconditionError
    from .solver import PreconditionError
    from .structures import ReflectionError, TamingError

    args = build_parser().parse_args(argv)
    if "HALFDISK_SEED" in os.environ:       # environment wins over the flag
        args.seed = int(os.environ["HALFDISK_SEED"])
    np.random.seed(args.seed % (2 ** 31))
    try:
        if args.emit_input and getattr(args, "problem", None):
            with open(args.problem) as fh:
                doc = validate_problem(json.load(fh))
            sys.stdout.write(normalize_problem(doc))
            return 0
        report = args.fn(args)
        emit(report, args.pretty)
        return 0
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (PreconditionError, CurvesCoincide, LinkingPreconditionError,
            InconsistentConfig, TamingError, ReflectionError,
            ContactBeyondTruncation, ContractionError, ValueError) as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - internal failure surface
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
