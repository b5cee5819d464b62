"""Ply materials: engineering constants, reduced stiffness and JSON material files."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InvalidMaterial, ParseError
from .kelvin import Tensor4Sym, invert
from .polar import PolarElastic, bounds_check, from_cartesian_sym, to_cartesian_sym

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class TechnicalConstants:
    E1: float
    E2: float
    G12: float
    nu12: float

    @property
    def nu21(self) -> float:
        return self.nu12 * self.E2 / self.E1


@dataclass(frozen=True)
class Material:
    """A ply material. ``source`` is either engineering constants or polar moduli."""

    name: str
    source: TechnicalConstants | PolarElastic
    ply_thickness: float
    units: str = ""

    def __post_init__(self):
        if not (math.isfinite(self.ply_thickness) and self.ply_thickness > 0):
            raise InvalidMaterial(f"{self.name}: ply thickness must be positive")
        src = self.source
        if isinstance(src, TechnicalConstants):
            vals = (src.E1, src.E2, src.G12, src.nu12)
            if not all(math.isfinite(v) for v in vals):
                raise InvalidMaterial(f"{self.name}: non-finite constants")
            if min(src.E1, src.E2, src.G12) <= 0:
                raise InvalidMaterial(f"{self.name}: E1, E2, G12 must be positive")
            if 1 - src.nu12 * src.nu21 <= 0:
                raise InvalidMaterial(f"{self.name}: 1 - nu12 nu21 must be positive")
        elif not isinstance(src, PolarElastic):
            raise InvalidMaterial(f"{self.name}: unsupported source {type(src).__name__}")
        report = bounds_check(self.polar)
        if not report.ok:
            raise InvalidMaterial(f"{self.name}: stiffness bounds violated: {'; '.join(report.violations)}")

    @property
    def Q(self) -> Tensor4Sym:
        return reduced_stiffness(self)

    @property
    def polar(self) -> PolarElastic:
        if isinstance(self.source, PolarElastic):
            return self.source
        return from_cartesian_sym(_technical_q(self.source))

    @property
    def anisotropy_ratio(self) -> float:
        return self.polar.anisotropy_ratio


def _technical_q(tc: TechnicalConstants) -> np.ndarray:
    d = 1 - tc.nu12 * tc.nu21
    q22 = tc.E2 / d
    return np.array([[tc.E1 / d, tc.nu12 * q22, 0.0], [tc.nu12 * q22, q22, 0.0], [0.0, 0.0, 2 * tc.G12]])


def reduced_stiffness(m: Material) -> Tensor4Sym:
    """Plane-stress reduced stiffness in the ply frame, Kelvin form."""
    if isinstance(m.source, TechnicalConstants):
        return Tensor4Sym(_technical_q(m.source), m.units)
    return to_cartesian_sym(m.source, 0.0, m.units)


def technical_constants(m: Material) -> TechnicalConstants:
    """Engineering constants in the ply frame, read off the compliance of Q."""
    s = np.asarray(invert(reduced_stiffness(m)))
    E1 = 1 / s[0, 0]
    return TechnicalConstants(E1=E1, E2=1 / s[1, 1], G12=1 / (2 * s[2, 2]), nu12=-s[0, 1] * E1)


BUILTIN_MATERIALS: dict[str, Material] = {
    # carbon-epoxy unidirectional; ply thickness is a typical value
    "T300-5208": Material("T300-5208", TechnicalConstants(181.0, 10.30, 7.17, 0.28), 0.125, "GPa,mm"),
    # carbon-epoxy balanced fabric
    "CE-fabric-gay": Material("CE-fabric-gay", TechnicalConstants(5.4e4, 5.4e4, 4e3, 0.045), 0.16, "MPa,mm"),
}


def builtin(name: str) -> Material:
    try:
        return BUILTIN_MATERIALS[name]
    except KeyError:
        raise InvalidMaterial(f"unknown built-in material {name!r}; have {sorted(BUILTIN_MATERIALS)}") from None


# ---- JSON I/O -------------------------------------------------------------

_TECH_KEYS = ("E1", "E2", "G12", "nu12")
_POLAR_KEYS = ("T0", "T1", "R0", "R1", "Phi0_deg", "Phi1_deg")
_MATERIAL_KEYS = {"name", "model", "params", "thickness", "units"}


def _number(v, where: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError("expected a number", where)
    return float(v)


def material_from_dict(d, where: str = "material") -> Material:
    if not isinstance(d, dict):
        raise ParseError("expected an object", where)
    extra = set(d) - _MATERIAL_KEYS
    if extra:
        raise ParseError(f"unknown field(s) {sorted(extra)}", where)
    for key in ("name", "model", "params", "thickness"):
        if key not in d:
            raise ParseError(f"missing field {key!r}", where)
    name = d["name"]
    if not isinstance(name, str) or not name:
        raise ParseError("name must be a non-empty string", f"{where}.name")
    units = d.get("units", "")
    if not isinstance(units, str):
        raise ParseError("units must be a string", f"{where}.units")
    params = d["params"]
    if not isinstance(params, dict):
        raise ParseError("expected an object", f"{where}.params")
    model = d["model"]
    keys = {"technical": _TECH_KEYS, "polar": _POLAR_KEYS}.get(model)
    if keys is None:
        raise ParseError("model must be 'technical' or 'polar'", f"{where}.model")
    extra = set(params) - set(keys)
    missing = [k for k in keys if k not in params]
    if extra:
        raise ParseError(f"unknown field(s) {sorted(extra)}", f"{where}.params")
    if missing:
        raise ParseError(f"missing field(s) {missing}", f"{where}.params")
    vals = {k: _number(params[k], f"{where}.params.{k}") for k in keys}
    if model == "technical":
        source = TechnicalConstants(**vals)
    else:
        try:
            source = PolarElastic(vals["T0"], vals["T1"], vals["R0"], vals["R1"],
                                  math.radians(vals["Phi0_deg"]), math.radians(vals["Phi1_deg"]))
        except ValueError as exc:
            raise InvalidMaterial(f"{name}: {exc}") from None
    thickness = _number(d["thickness"], f"{where}.thickness")
    return Material(name, source, thickness, units)


def material_to_dict(m: Material) -> dict:
    src = m.source
    if isinstance(src, TechnicalConstants):
        model, params = "technical", {k: getattr(src, k) for k in _TECH_KEYS}
    else:
        model = "polar"
        params = {"T0": src.T0, "T1": src.T1, "R0": src.R0, "R1": src.R1,
                  "Phi0_deg": math.degrees(src.Phi0), "Phi1_deg": math.degrees(src.Phi1)}
    return {"name": m.name, "model": model, "params": params, "thickness": m.ply_thickness, "units": m.units}


def parse_json_text(text: str, source: str = "<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"{source}:{exc.lineno}:{exc.colno}") from None


def load_materials(path) -> list[Material]:
    text = Path(path).read_text()
    if not text.strip():
        return []
    doc = parse_json_text(text, str(path))
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", str(path))
    extra = set(doc) - {"schema_version", "materials"}
    if extra:
        raise ParseError(f"unknown field(s) {sorted(extra)}", str(path))
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ParseError(f"schema_version must be {SCHEMA_VERSION}", f"{path}: schema_version")
    items = doc.get("materials", [])
    if not isinstance(items, list):
        raise ParseError("expected a list", f"{path}: materials")
    out = [material_from_dict(item, f"materials[{i}]") for i, item in enumerate(items)]
    names = [m.name for m in out]
    dup = {n for n in names if names.count(n) > 1}
    if dup:
        raise ParseError(f"duplicate material name(s) {sorted(dup)}", str(path))
    return out


def save_materials(path, materials) -> None:
    doc = {"schema_version": SCHEMA_VERSION, "materials": [material_to_dict(m) for m in materials]}
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def material_library(path=None) -> dict[str, Material]:
    """Built-ins overlaid with the materials of an optional file."""
    lib = dict(BUILTIN_MATERIALS)
    if path is not None:
        lib.update({m.name: m for m in load_materials(path)})
    return lib
