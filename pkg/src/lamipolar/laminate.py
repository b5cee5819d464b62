"""Stacks, homogenized stiffness A, B, D, lamination parameters and compliance.

Conventions: ply k = 1 sits at the bottom, ``z0 = -h/2``. The normalized
constitutive law is::

    N = h A eps + h^2/2 B kappa
    M = h^2/2 B eps + h^3/12 D kappa

with
``A = (1/h) sum (z_k - z_{k-1}) Q_k``,
``B = (1/h^2) sum (z_k^2 - z_{k-1}^2) Q_k``,
``D = (4/h^3) sum (z_k^3 - z_{k-1}^3) Q_k``.
Its inverse uses the compliance blocks
``calA = (A - 3 B D^-1 B)^-1``, ``calB = -3 calA B D^-1``,
``calD = (D - 3 B A^-1 B)^-1``.
"""

from __future__ import annotations

import cmath
import functools
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .config import default_tol
from .errors import InvalidStack, NotIdenticalPly, ParseError, UnitsMismatch
from .kelvin import Tensor4Gen, Tensor4Sym, invert, rotate
from .material import Material, material_from_dict, parse_json_text, reduced_stiffness
from .polar import PolarElastic, PolarGeneral, _angle_from, from_cartesian_gen, from_cartesian_sym

STACK_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Ply:
    material: Material
    angle: float  # radians, counter-clockwise from the global x axis

    @property
    def thickness(self) -> float:
        return self.material.ply_thickness


@dataclass(frozen=True)
class Stack:
    """Ordered plies, bottom first."""

    plies: tuple[Ply, ...]
    notes: str = ""

    def __post_init__(self):
        object.__setattr__(self, "plies", tuple(self.plies))
        if not self.plies:
            raise InvalidStack("a stack needs at least one ply")
        for p in self.plies:
            if not math.isfinite(p.angle):
                raise InvalidStack("ply angles must be finite")

    @classmethod
    def from_angles(cls, material: Material, angles_deg, notes: str = "") -> "Stack":
        return cls(tuple(Ply(material, math.radians(a)) for a in angles_deg), notes)

    @property
    def n(self) -> int:
        return len(self.plies)

    @property
    def angles(self) -> np.ndarray:
        return np.array([p.angle for p in self.plies])

    @property
    def angles_deg(self) -> list[float]:
        return [math.degrees(p.angle) for p in self.plies]

    @property
    def thicknesses(self) -> np.ndarray:
        return np.array([p.thickness for p in self.plies])

    @property
    def h(self) -> float:
        return float(self.thicknesses.sum())

    @property
    def z(self) -> np.ndarray:
        """Interface coordinates z_0 .. z_n."""
        t = self.thicknesses
        return np.concatenate(([0.0], np.cumsum(t))) - t.sum() / 2

    @property
    def identical_ply(self) -> bool:
        first = self.plies[0].material
        return all(p.material == first for p in self.plies)

    @property
    def units(self) -> str:
        tags = {p.material.units for p in self.plies}
        if len(tags) > 1:
            raise UnitsMismatch(f"plies use different unit tags: {sorted(tags)}")
        return tags.pop()

    def rotated(self, alpha: float) -> "Stack":
        """Every ply orientation advanced by ``alpha`` radians."""
        return Stack(tuple(Ply(p.material, p.angle + alpha) for p in self.plies), self.notes)


def flip_z(stack: Stack) -> Stack:
    """The same laminate seen with the z axis reversed (ply order reversed)."""
    return Stack(tuple(reversed(stack.plies)), stack.notes)


@dataclass(frozen=True)
class LayerWeights:
    a: np.ndarray
    b: np.ndarray
    d: np.ndarray


def layer_weights(n: int) -> LayerWeights:
    """Closed-form weights of n identical plies."""
    if n < 1:
        raise InvalidStack("n must be positive")
    k = np.arange(1, n + 1, dtype=float)
    a = np.full(n, 1.0 / n)
    b = (2 * k - n - 1) / n**2
    d = (12 * k * (k - n - 1) + 4 + 3 * n * (n + 2)) / n**3
    return LayerWeights(a, b, d)


def stack_weights(stack: Stack) -> LayerWeights:
    """Weights of A, B, D for any stack, from the z coordinates."""
    z, h = stack.z, stack.h
    lo, hi = z[:-1], z[1:]
    return LayerWeights((hi - lo) / h, (hi**2 - lo**2) / h**2, 4 * (hi**3 - lo**3) / h**3)


@functools.lru_cache(maxsize=4096)
def ply_stiffness(material: Material, angle: float) -> np.ndarray:
    """Q of a ply oriented at ``angle``: the ply frame is the global frame rotated by angle."""
    q = np.asarray(rotate(reduced_stiffness(material), -angle))
    q.setflags(write=False)
    return q


@dataclass(frozen=True)
class LaminationParameters:
    """The twelve lamination parameters of an identical-ply stack.

    ``xi[0]`` is xi1. They pair up into complex moments ``sum w_k exp(i m delta_k)``
    with weights a (extension), b (coupling), d (bending) and m = 4 or 2.
    """

    xi: tuple[float, ...]

    def moment(self, j: int) -> complex:
        """j-th complex pair, j = 1..6: xi_{2j-1} + i xi_{2j}."""
        return complex(self.xi[2 * j - 2], self.xi[2 * j - 1])

    extension4 = property(lambda self: self.moment(1))
    extension2 = property(lambda self: self.moment(2))
    coupling4 = property(lambda self: self.moment(3))
    coupling2 = property(lambda self: self.moment(4))
    bending4 = property(lambda self: self.moment(5))
    bending2 = property(lambda self: self.moment(6))

    def as_dict(self) -> dict:
        return {f"xi{i + 1}": v for i, v in enumerate(self.xi)}


def lamination_parameters(stack: Stack) -> LaminationParameters:
    if not stack.identical_ply:
        raise NotIdenticalPly("lamination parameters need identical plies")
    w = layer_weights(stack.n)
    d = stack.angles
    xi = []
    for weights in (w.a, w.b, w.d):
        for mult in (4, 2):
            zsum = complex(np.sum(weights * np.exp(1j * mult * d)))
            xi += [zsum.real, zsum.imag]
    return LaminationParameters(tuple(xi))


class PolarABD(NamedTuple):
    A: PolarElastic
    B: PolarElastic
    D: PolarElastic


def _polar_from_sums(T0, T1, z0: complex, z1: complex, tol: float) -> PolarElastic:
    R0, R1 = abs(z0), abs(z1)
    eps = tol * max(abs(T0), abs(T1), R0, R1, 1e-300)
    d0, d1 = R0 > eps, R1 > eps
    return PolarElastic(float(T0), float(T1), R0, R1, _angle_from(z0, 4, d0), _angle_from(z1, 2, d1), d0, d1)


def polar_homogenize(stack: Stack, tol: float | None = None) -> PolarABD:
    """A, B, D homogenized directly on polar parameters."""
    tol = default_tol() if tol is None else tol
    w = stack_weights(stack)
    out = []
    for weights in (w.a, w.b, w.d):
        T0 = T1 = 0.0
        z0 = z1 = 0j
        for wk, ply in zip(weights, stack.plies):
            p = ply.material.polar
            T0 += wk * p.T0
            T1 += wk * p.T1
            z0 += wk * p.R0 * cmath.exp(4j * (p.Phi0 + ply.angle))
            z1 += wk * p.R1 * cmath.exp(2j * (p.Phi1 + ply.angle))
        out.append(_polar_from_sums(float(T0), float(T1), z0, z1, tol))
    return PolarABD(*out)


def compliance(A, B, D) -> tuple[Tensor4Sym, Tensor4Gen, Tensor4Sym]:
    """Compliance blocks (calA, calB, calD) of the normalized constitutive law."""
    a, b, d = (np.asarray(x, dtype=float) for x in (A, B, D))
    units = getattr(A, "units", "")
    cunits = f"1/({units})" if units else ""
    a_inv = np.asarray(invert(a, "A"))
    d_inv = np.asarray(invert(d, "D"))
    cal_a = np.asarray(invert(_sym(a - 3 * b @ d_inv @ b), "A - 3 B D^-1 B"))
    cal_d = np.asarray(invert(_sym(d - 3 * b @ a_inv @ b), "D - 3 B A^-1 B"))
    cal_b = -3 * cal_a @ b @ d_inv
    return Tensor4Sym(_sym(cal_a), cunits), Tensor4Gen(cal_b, cunits), Tensor4Sym(_sym(cal_d), cunits)


def coupling_compliance_variants(A, B, D) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The three equivalent expressions of calB, for consistency checks."""
    a, b, d = (np.asarray(x, dtype=float) for x in (A, B, D))
    cal_a, _, cal_d = compliance(A, B, D)
    a_inv, d_inv = np.asarray(invert(a)), np.asarray(invert(d))
    return (-3 * np.asarray(cal_a) @ b @ d_inv,
            (-3 * np.asarray(cal_d) @ b @ a_inv).T,
            -3 * a_inv @ b @ np.asarray(cal_d))


def _sym(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.T)


@dataclass(frozen=True, eq=False)
class LaminateTensors:
    """Homogenized stiffness and compliance of a laminate plus derived views.

    Build with :func:`homogenize` from a stack, or :meth:`from_tensors` for
    directly specified A, B, D (used when constructing analytic instances).
    """

    A: Tensor4Sym
    B: Tensor4Sym
    D: Tensor4Sym
    calA: Tensor4Sym
    calB: Tensor4Gen
    calD: Tensor4Sym
    h: float = 1.0
    identical_ply: bool = False
    ply: PolarElastic | None = None  # basic ply polar moduli when identical_ply
    stack: Stack | None = None
    tol: float = field(default_factory=default_tol)

    @classmethod
    def from_tensors(cls, A, B, D, h: float = 1.0, ply: PolarElastic | None = None,
                     units: str = "", tol: float | None = None) -> "LaminateTensors":
        """Laminate from given stiffness blocks. Passing ``ply`` marks it identical-ply."""
        A, B, D = (x if isinstance(x, Tensor4Sym) else Tensor4Sym(x, units) for x in (A, B, D))
        cal_a, cal_b, cal_d = compliance(A, B, D)
        return cls(A, B, D, cal_a, cal_b, cal_d, h, ply is not None, ply, None,
                   default_tol() if tol is None else tol)

    @property
    def units(self) -> str:
        return self.A.units

    @cached_property
    def polar_A(self) -> PolarElastic:
        return from_cartesian_sym(self.A, self.tol)

    @cached_property
    def polar_B(self) -> PolarElastic:
        return from_cartesian_sym(self.B, self.tol)

    @cached_property
    def polar_D(self) -> PolarElastic:
        return from_cartesian_sym(self.D, self.tol)

    @cached_property
    def polar_calA(self) -> PolarElastic:
        return from_cartesian_sym(self.calA, self.tol)

    @cached_property
    def polar_calD(self) -> PolarElastic:
        return from_cartesian_sym(self.calD, self.tol)

    @cached_property
    def polar_calB(self) -> PolarGeneral:
        return from_cartesian_gen(self.calB, self.tol)

    @cached_property
    def lamination(self) -> LaminationParameters | None:
        if self.stack is None or not self.identical_ply:
            return None
        return lamination_parameters(self.stack)

    def _norm(self, m) -> float:
        return float(np.linalg.norm(np.asarray(m)))

    @property
    def B_zero(self) -> bool:
        return self._norm(self.B) < self.tol * self._norm(self.A)

    @property
    def A_equals_D(self) -> bool:
        return self._norm(np.asarray(self.A) - np.asarray(self.D)) < self.tol * self._norm(self.A)

    @property
    def quasi_homogeneous(self) -> bool:
        return self.A_equals_D and self.B_zero

    @property
    def qhcl(self) -> bool:
        return self.A_equals_D and not self.B_zero

    def flags(self) -> dict:
        return {"identical_ply": self.identical_ply, "B_zero": self.B_zero,
                "quasi_homogeneous": self.quasi_homogeneous, "qhcl": self.qhcl}

    def tensor(self, name: str):
        """Look up A, B, D, calA, calB or calD by name."""
        if name not in ("A", "B", "D", "calA", "calB", "calD"):
            raise KeyError(name)
        return getattr(self, name)


def homogenize(stack: Stack, tol: float | None = None) -> LaminateTensors:
    units = stack.units  # raises UnitsMismatch on mixed tags
    w = stack_weights(stack)
    qs = np.array([ply_stiffness(p.material, p.angle) for p in stack.plies])
    A = Tensor4Sym(np.tensordot(w.a, qs, axes=1), units)
    B = Tensor4Sym(np.tensordot(w.b, qs, axes=1), units)
    D = Tensor4Sym(np.tensordot(w.d, qs, axes=1), units)
    cal_a, cal_b, cal_d = compliance(A, B, D)
    identical = stack.identical_ply
    ply = stack.plies[0].material.polar if identical else None
    return LaminateTensors(A, B, D, cal_a, cal_b, cal_d, stack.h, identical, ply, stack,
                           default_tol() if tol is None else tol)


# ---- stack files ------------------------------------------------------------

def _resolve_material(ref, library: dict[str, Material], where: str) -> Material:
    if isinstance(ref, str):
        if ref not in library:
            raise ParseError(f"unknown material {ref!r}", where)
        return library[ref]
    return material_from_dict(ref, where)


def stack_from_dict(doc, library: dict[str, Material]) -> Stack:
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", "stack")
    extra = set(doc) - {"schema_version", "material", "plies", "notes"}
    if extra:
        raise ParseError(f"unknown field(s) {sorted(extra)}", "stack")
    if doc.get("schema_version") != STACK_SCHEMA_VERSION:
        raise ParseError(f"schema_version must be {STACK_SCHEMA_VERSION}", "schema_version")
    default = _resolve_material(doc["material"], library, "material") if "material" in doc else None
    plies_doc = doc.get("plies")
    if not isinstance(plies_doc, list) or not plies_doc:
        raise ParseError("expected a non-empty list", "plies")
    plies = []
    for i, item in enumerate(plies_doc):
        where = f"plies[{i}]"
        if isinstance(item, (int, float)) and not isinstance(item, bool):
            item = {"angle_deg": item}
        if not isinstance(item, dict):
            raise ParseError("expected an object or a number", where)
        extra = set(item) - {"angle_deg", "material"}
        if extra:
            raise ParseError(f"unknown field(s) {sorted(extra)}", where)
        angle = item.get("angle_deg")
        if isinstance(angle, bool) or not isinstance(angle, (int, float)):
            raise ParseError("angle_deg must be a number", f"{where}.angle_deg")
        mat = _resolve_material(item["material"], library, f"{where}.material") if "material" in item else default
        if mat is None:
            raise ParseError("no material given for ply and no stack default", where)
        plies.append(Ply(mat, math.radians(angle)))
    notes = doc.get("notes", "")
    if not isinstance(notes, str):
        raise ParseError("notes must be a string", "notes")
    return Stack(tuple(plies), notes)


def load_stack(path, library: dict[str, Material]) -> Stack:
    doc = parse_json_text(Path(path).read_text(), str(path))
    return stack_from_dict(doc, library)


def stack_to_dict(stack: Stack) -> dict:
    from .material import BUILTIN_MATERIALS, material_to_dict

    def ref(m: Material):
        return m.name if BUILTIN_MATERIALS.get(m.name) == m else material_to_dict(m)

    first = stack.plies[0].material
    plies = []
    for p in stack.plies:
        entry = {"angle_deg": math.degrees(p.angle)}
        if p.material != first:
            entry["material"] = ref(p.material)
        plies.append(entry)
    return {"schema_version": STACK_SCHEMA_VERSION, "material": ref(first), "plies": plies, "notes": stack.notes}


def save_stack(path, stack: Stack) -> None:
    Path(path).write_text(json.dumps(stack_to_dict(stack), indent=2) + "\n")
