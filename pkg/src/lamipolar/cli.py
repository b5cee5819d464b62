"""Command-line interface.

Angles are in degrees at every boundary. Exit codes: 0 success, 1 condition
not met (check-bsym only), 2 input error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import default_tol
from .coupling import bsym_conditions, rari_constancy, shape_classify, singularity
from .errors import LamipolarError, ParseError, UnknownQuantity
from .kelvin import Vec3K, rotate
from .laminate import LaminateTensors, homogenize, load_stack, stack_to_dict
from .material import material_library, parse_json_text
from .polar import bounds_check, classify
from .response import LoadCase, respond, surface_mesh
from .search import load_search_spec, search

EXIT_OK, EXIT_CONDITION, EXIT_INPUT = 0, 1, 2
TENSOR_NAMES = ("A", "B", "D", "calA", "calB", "calD")


def _matrix(m) -> list[list[float]]:
    return np.asarray(m).tolist()


def analysis_report(lt: LaminateTensors, tol: float) -> dict:
    polar = {"A": lt.polar_A, "B": lt.polar_B, "D": lt.polar_D, "calA": lt.polar_calA, "calD": lt.polar_calD}
    tensors = {}
    for name in TENSOR_NAMES:
        entry = {"kelvin": _matrix(lt.tensor(name))}
        if name == "calB":
            entry["polar"] = lt.polar_calB.as_dict(degrees=True)
        else:
            p = polar[name]
            entry["polar"] = p.as_dict(degrees=True)
            entry["symmetry"] = str(classify(p, tol))
            entry["bounds"] = list(bounds_check(p, "coupling" if name == "B" else "stiffness").violations)
        tensors[name] = entry
    rari = rari_constancy(lt, tol)
    lam = lt.lamination
    return {
        "stack": stack_to_dict(lt.stack) if lt.stack is not None else None,
        "h": lt.h,
        "units": lt.units,
        "tol": tol,
        "flags": lt.flags(),
        "tensors": tensors,
        "coupling": {
            "calB_symmetric": bsym_conditions(lt, tol).symmetric,
            "rari_constant_calB": rari.rari_constant(tol),
            "B_singularity": singularity(lt, tol).as_dict(),
            "shapes": shape_classify(lt, tol).as_dict(),
        },
        "lamination_parameters": lam.as_dict() if lam is not None else None,
    }


def _text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(f"{pad}-\n" + _text(v, indent + 1) if isinstance(v, (dict, list)) and not _flat_list(v)
                          else f"{pad}- {_scalar(v)}" for v in obj)
    return f"{pad}{_scalar(obj)}"


def _flat_list(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) or _flat_list(x) for x in v)


def _scalar(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    return str(v)


def _emit(report: dict, args) -> None:
    if args.text:
        print(_text(report))
    else:
        print(json.dumps(report, indent=2))


def _load(args) -> LaminateTensors:
    lib = material_library(args.materials)
    try:
        stack = load_stack(args.stack, lib)
    except ParseError as e:
        if e.location and e.location.startswith(str(args.stack)):
            raise
        raise ParseError(str(e), args.stack) from None
    return homogenize(stack, args.tol)


# ---- diagram -------------------------------------------------------------------------

def diagram_quantity(lt: LaminateTensors, quantity: str):
    """Callable theta (radians) -> value for a directional-diagram quantity.

    Quantities: component names such as A11, D16, B66, calA12, calB61 (Kelvin
    components, indices 1, 2, 6), and the moduli EA = 1/calA11, ED = 1/calD11.
    """
    if quantity in ("EA", "ED"):
        t = np.asarray(lt.calA if quantity == "EA" else lt.calD)
        return lambda th: 1.0 / float(rotate(t, th)[0, 0])
    for name in ("calA", "calB", "calD", "A", "B", "D"):
        if quantity.startswith(name):
            idx = quantity[len(name):]
            break
    else:
        raise UnknownQuantity(f"unknown quantity {quantity!r}")
    pos = {"1": 0, "2": 1, "6": 2}
    if len(idx) != 2 or any(c not in pos for c in idx):
        raise UnknownQuantity(f"unknown quantity {quantity!r}")
    i, j = pos[idx[0]], pos[idx[1]]
    t = np.asarray(lt.tensor(name))
    return lambda th: float(rotate(t, th)[i, j])


def diagram_csv(lt: LaminateTensors, quantity: str, samples: int = 720) -> str:
    if samples < 8:
        raise ValueError("samples must be at least 8")
    f = diagram_quantity(lt, quantity)
    rows = ["theta_deg,value"]
    for k in range(samples):
        deg = 360.0 * k / samples
        rows.append(f"{deg!r},{f(math.radians(deg))!r}")
    return "\n".join(rows) + "\n"


# ---- respond --------------------------------------------------------------------------

def load_case_from_dict(doc, lt: LaminateTensors, where: str = "load") -> LoadCase:
    if not isinstance(doc, dict):
        raise ParseError("load must be a JSON object", where)
    allowed = {"schema_version", "N", "M", "Lx", "Ly", "h", "frame_deg", "units"}
    extra = set(doc) - allowed
    if extra:
        raise ParseError(f"unknown field(s) {sorted(extra)}", where)

    def vec(key):
        v = doc.get(key, [0.0, 0.0, 0.0])
        if not (isinstance(v, list) and len(v) == 3 and all(isinstance(x, (int, float)) for x in v)):
            raise ParseError("expected three numbers", f"{where}.{key}")
        return Vec3K.of(v)

    frame = doc.get("frame_deg", 0.0)
    if frame == "compliance":
        frame_rad = lt.polar_calB.phi0
    elif isinstance(frame, (int, float)):
        frame_rad = math.radians(frame)
    else:
        raise ParseError('frame_deg must be a number or "compliance"', f"{where}.frame_deg")
    try:
        return LoadCase(vec("N"), vec("M"), float(doc.get("Lx", 1.0)), float(doc.get("Ly", 1.0)),
                        None if doc.get("h") is None else float(doc["h"]), frame_rad, doc.get("units"))
    except (TypeError, ValueError) as e:
        raise ParseError(str(e), where) from None


# ---- commands --------------------------------------------------------------------------

def cmd_analyze(args) -> int:
    _emit(analysis_report(_load(args), args.tol), args)
    return EXIT_OK


def cmd_diagram(args) -> int:
    text = diagram_csv(_load(args), args.quantity, args.samples)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_check_bsym(args) -> int:
    rep = bsym_conditions(_load(args), args.tol)
    _emit(rep.as_dict(), args)
    return EXIT_OK if rep.symmetric else EXIT_CONDITION


def cmd_respond(args) -> int:
    lt = _load(args)
    doc = parse_json_text(Path(args.load).read_text(), args.load)
    lc = load_case_from_dict(doc, lt, args.load)
    rr = respond(lt, lc)
    out = rr.as_dict()
    out["frame_deg"] = math.degrees(lc.frame)
    if args.mesh:
        mesh = surface_mesh(rr, lc, args.nx, args.ny)
        if args.mesh.endswith(".obj"):
            mesh.to_obj(args.mesh)
        else:
            mesh.to_csv(args.mesh)
        out["mesh"] = {"path": args.mesh, "vertices": mesh.vertex_count}
    _emit(out, args)
    return EXIT_OK


def cmd_search(args) -> int:
    cfg, obj = load_search_spec(args.spec)
    res = search(cfg, obj, args.tol)
    _emit(res.as_dict(), args)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lamipolar", description="Polar analysis of coupled laminates.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, stack=True):
        if stack:
            p.add_argument("--stack", required=True, help="stack JSON file")
            p.add_argument("--materials", help="extra materials JSON file")
        p.add_argument("--tol", type=float, default=None, help="relative tolerance (default $LAMIPOLAR_TOL or 1e-8)")
        fmt = p.add_mutually_exclusive_group()
        fmt.add_argument("--json", action="store_true", help="JSON output (default)")
        fmt.add_argument("--text", action="store_true", help="plain-text output")

    p = sub.add_parser("analyze", help="tensors, polar forms and coupling flags of a stack")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("diagram", help="directional diagram of a quantity as CSV")
    common(p)
    p.add_argument("--quantity", required=True, help="A11, D16, calB61, EA, ED, ...")
    p.add_argument("--samples", type=int, default=720)
    p.add_argument("--out", help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_diagram)

    p = sub.add_parser("check-bsym", help="is calB symmetric? exit 0 yes, 1 no")
    common(p)
    p.set_defaults(func=cmd_check_bsym)

    p = sub.add_parser("respond", help="strains, curvatures and deformed surface under a load")
    common(p)
    p.add_argument("--load", required=True, help="load JSON file")
    p.add_argument("--mesh", help="write the deformed surface (.csv or .obj)")
    p.add_argument("--nx", type=int, default=21)
    p.add_argument("--ny", type=int, default=21)
    p.set_defaults(func=cmd_respond)

    p = sub.add_parser("search", help="anneal a stacking sequence toward an objective")
    common(p, stack=False)
    p.add_argument("--spec", required=True, help="search spec JSON file")
    p.set_defaults(func=cmd_search)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.tol is None:
        args.tol = default_tol()
    elif not args.tol > 0:
        print("error: --tol must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (LamipolarError, ValueError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
