"""Polar parameters of plane fourth-rank tensors.

Symmetric (elastic-type) tensors are described by two isotropic moduli
``T0, T1``, two anisotropic moduli ``R0, R1`` and two angles ``Phi0, Phi1``.
Non-symmetric tensors such as the compliance coupling need nine parameters:
``t0, t1, t3, r0, r1, r2, phi0, phi1, phi2``.

Components in a frame rotated by ``theta`` (Kelvin, symmetric case)::

    m11 = T0 + 2 T1 + R0 cos4(Phi0-theta) + 4 R1 cos2(Phi1-theta)
    m12 = -T0 + 2 T1 - R0 cos4(Phi0-theta)
    m16 = sqrt2 [R0 sin4(Phi0-theta) + 2 R1 sin2(Phi1-theta)]
    m22 = T0 + 2 T1 + R0 cos4(Phi0-theta) - 4 R1 cos2(Phi1-theta)
    m26 = sqrt2 [-R0 sin4(Phi0-theta) + 2 R1 sin2(Phi1-theta)]
    m66 = 2 [T0 - R0 cos4(Phi0-theta)]
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .config import default_tol
from .kelvin import SQRT2, Tensor4Gen, Tensor4Sym

QUARTER_PI = math.pi / 4
HALF_PI = math.pi / 2


def wrap(angle: float, period: float) -> float:
    """Representative of ``angle`` modulo ``period`` in (-period/2, period/2]."""
    r = math.remainder(angle, period)
    if r <= -period / 2:
        r += period
    return r


def _angle_from(z: complex, mult: int, defined: bool) -> float:
    if not defined:
        return 0.0
    return wrap(math.atan2(z.imag, z.real) / mult, 2 * math.pi / mult)


@dataclass(frozen=True)
class PolarElastic:
    T0: float
    T1: float
    R0: float
    R1: float
    Phi0: float = 0.0
    Phi1: float = 0.0
    phi0_defined: bool = True
    phi1_defined: bool = True

    def __post_init__(self):
        vals = (self.T0, self.T1, self.R0, self.R1, self.Phi0, self.Phi1)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("polar parameters must be finite")
        if self.R0 < 0 or self.R1 < 0:
            raise ValueError("R0 and R1 are moduli and must be non-negative")
        object.__setattr__(self, "Phi0", wrap(self.Phi0, HALF_PI))
        object.__setattr__(self, "Phi1", wrap(self.Phi1, math.pi))

    @property
    def scale(self) -> float:
        return max(abs(self.T0), abs(self.T1), self.R0, self.R1)

    @property
    def anisotropy_ratio(self) -> float:
        """R1/R0, or inf when R0 vanishes."""
        return self.R1 / self.R0 if self.R0 > 0 else math.inf

    def rotated(self, theta: float) -> "PolarElastic":
        """Parameters seen from a frame rotated by theta: angles shift by -theta."""
        return PolarElastic(self.T0, self.T1, self.R0, self.R1, self.Phi0 - theta,
                            self.Phi1 - theta, self.phi0_defined, self.phi1_defined)

    def as_dict(self, degrees: bool = False) -> dict:
        conv = math.degrees if degrees else float
        suffix = "_deg" if degrees else ""
        return {"T0": self.T0, "T1": self.T1, "R0": self.R0, "R1": self.R1,
                "Phi0" + suffix: conv(self.Phi0) if self.phi0_defined else None,
                "Phi1" + suffix: conv(self.Phi1) if self.phi1_defined else None}


@dataclass(frozen=True)
class PolarGeneral:
    t0: float
    t1: float
    t3: float
    r0: float
    r1: float
    r2: float
    phi0: float = 0.0
    phi1: float = 0.0
    phi2: float = 0.0
    phi0_defined: bool = True
    phi1_defined: bool = True
    phi2_defined: bool = True

    def __post_init__(self):
        if min(self.r0, self.r1, self.r2) < 0:
            raise ValueError("r0, r1, r2 must be non-negative")
        object.__setattr__(self, "phi0", wrap(self.phi0, HALF_PI))
        object.__setattr__(self, "phi1", wrap(self.phi1, math.pi))
        object.__setattr__(self, "phi2", wrap(self.phi2, math.pi))

    @property
    def scale(self) -> float:
        return max(abs(self.t0), abs(self.t1), abs(self.t3), self.r0, self.r1, self.r2)

    def rotated(self, theta: float) -> "PolarGeneral":
        return PolarGeneral(self.t0, self.t1, self.t3, self.r0, self.r1, self.r2,
                            self.phi0 - theta, self.phi1 - theta, self.phi2 - theta,
                            self.phi0_defined, self.phi1_defined, self.phi2_defined)

    def is_elastic(self, tol: float | None = None) -> bool:
        """True when t3 = 0 and the r1/r2 terms coincide (the tensor is symmetric)."""
        tol = default_tol() if tol is None else tol
        eps = tol * max(self.scale, 1e-300)
        z1 = self.r1 * complex(math.cos(2 * self.phi1), math.sin(2 * self.phi1))
        z2 = self.r2 * complex(math.cos(2 * self.phi2), math.sin(2 * self.phi2))
        return abs(self.t3) <= eps and abs(z1 - z2) <= eps

    def as_dict(self, degrees: bool = False) -> dict:
        conv = math.degrees if degrees else float
        sfx = "_deg" if degrees else ""
        out = {k: getattr(self, k) for k in ("t0", "t1", "t3", "r0", "r1", "r2")}
        for name in ("phi0", "phi1", "phi2"):
            out[name + sfx] = conv(getattr(self, name)) if getattr(self, name + "_defined") else None
        return out


def from_cartesian_sym(t, tol: float | None = None) -> PolarElastic:
    tol = default_tol() if tol is None else tol
    m = np.asarray(t, dtype=float).tolist()
    T0 = (m[0][0] + m[1][1] - 2 * m[0][1] + 2 * m[2][2]) / 8
    T1 = (m[0][0] + m[1][1] + 2 * m[0][1]) / 8
    z0 = complex((m[0][0] + m[1][1] - 2 * m[0][1] - 2 * m[2][2]) / 8,
                 (m[0][2] - m[1][2]) / (2 * SQRT2))
    z1 = complex((m[0][0] - m[1][1]) / 8, (m[0][2] + m[1][2]) / (4 * SQRT2))
    R0, R1 = abs(z0), abs(z1)
    eps = tol * max(abs(T0), abs(T1), R0, R1, 1e-300)
    d0, d1 = R0 > eps, R1 > eps
    return PolarElastic(T0, T1, R0, R1, _angle_from(z0, 4, d0), _angle_from(z1, 2, d1), d0, d1)


def to_cartesian_sym(p: PolarElastic, theta: float = 0.0, units: str = "") -> Tensor4Sym:
    c4, s4 = math.cos(4 * (p.Phi0 - theta)), math.sin(4 * (p.Phi0 - theta))
    c2, s2 = math.cos(2 * (p.Phi1 - theta)), math.sin(2 * (p.Phi1 - theta))
    T0, T1, R0, R1 = p.T0, p.T1, p.R0, p.R1
    m16 = SQRT2 * (R0 * s4 + 2 * R1 * s2)
    m26 = SQRT2 * (-R0 * s4 + 2 * R1 * s2)
    m12 = -T0 + 2 * T1 - R0 * c4
    return Tensor4Sym(
        [
            [T0 + 2 * T1 + R0 * c4 + 4 * R1 * c2, m12, m16],
            [m12, T0 + 2 * T1 + R0 * c4 - 4 * R1 * c2, m26],
            [m16, m26, 2 * (T0 - R0 * c4)],
        ],
        units,
    )


def from_cartesian_gen(t, tol: float | None = None) -> PolarGeneral:
    """Nine polar parameters of a general Kelvin matrix (linear inverse, exact)."""
    tol = default_tol() if tol is None else tol
    m = np.asarray(t, dtype=float).tolist()
    m11, m12, m21, m22, m33 = m[0][0], m[0][1], m[1][0], m[1][1], m[2][2]
    s13, s23, s31, s32 = m[0][2] / SQRT2, m[1][2] / SQRT2, m[2][0] / SQRT2, m[2][1] / SQRT2
    t1 = (m11 + m22 + m12 + m21) / 8
    t0 = (m11 + m22 - m12 - m21 + 2 * m33) / 8
    t3 = (s31 - s32 - s13 + s23) / 4
    z0 = complex((m11 + m22 - m12 - m21 - 2 * m33) / 8, (s13 - s23 + s31 - s32) / 4)
    z1 = complex((m11 - m22 + m12 - m21) / 8, (s31 + s32) / 4)
    z2 = complex((m11 - m22 - m12 + m21) / 8, (s13 + s23) / 4)
    r0, r1, r2 = abs(z0), abs(z1), abs(z2)
    eps = tol * max(abs(t0), abs(t1), abs(t3), r0, r1, r2, 1e-300)
    d0, d1, d2 = r0 > eps, r1 > eps, r2 > eps
    return PolarGeneral(t0, t1, t3, r0, r1, r2, _angle_from(z0, 4, d0),
                        _angle_from(z1, 2, d1), _angle_from(z2, 2, d2), d0, d1, d2)


def to_cartesian_gen(p: PolarGeneral, theta: float = 0.0, units: str = "") -> Tensor4Gen:
    c0, s0 = math.cos(4 * (p.phi0 - theta)), math.sin(4 * (p.phi0 - theta))
    c1, s1 = math.cos(2 * (p.phi1 - theta)), math.sin(2 * (p.phi1 - theta))
    c2, s2 = math.cos(2 * (p.phi2 - theta)), math.sin(2 * (p.phi2 - theta))
    t0, t1, t3, r0, r1, r2 = p.t0, p.t1, p.t3, p.r0, p.r1, p.r2
    return Tensor4Gen(
        [
            [t0 + 2 * t1 + r0 * c0 + 2 * r1 * c1 + 2 * r2 * c2,
             -t0 + 2 * t1 - r0 * c0 + 2 * r1 * c1 - 2 * r2 * c2,
             SQRT2 * (-t3 + r0 * s0 + 2 * r2 * s2)],
            [-t0 + 2 * t1 - r0 * c0 - 2 * r1 * c1 + 2 * r2 * c2,
             t0 + 2 * t1 + r0 * c0 - 2 * r1 * c1 - 2 * r2 * c2,
             SQRT2 * (t3 - r0 * s0 + 2 * r2 * s2)],
            [SQRT2 * (t3 + r0 * s0 + 2 * r1 * s1),
             SQRT2 * (-t3 - r0 * s0 + 2 * r1 * s1),
             2 * (t0 - r0 * c0)],
        ],
        units,
    )


class Symmetry(enum.Enum):
    GENERAL = "GeneralAnisotropic"
    ORDINARY_ORTHOTROPIC = "OrdinaryOrthotropic"
    R0_ORTHOTROPIC = "R0Orthotropic"
    SQUARE_SYMMETRIC = "SquareSymmetric"
    ISOTROPIC = "Isotropic"


@dataclass(frozen=True)
class SymmetryClass:
    kind: Symmetry
    k: int | None = None  # orthotropy branch, Phi0 - Phi1 = k pi/4
    tol: float = field(default=0.0, compare=False)

    def __str__(self) -> str:
        return self.kind.value + (f"(k={self.k})" if self.k is not None else "")


def orthotropy_branch(delta: float, tol: float) -> int | None:
    """k in {0, 1} when ``delta`` is within ``tol`` of a multiple of pi/4, else None."""
    q = delta / QUARTER_PI
    n = round(q)
    if abs(q - n) * QUARTER_PI > tol:
        return None
    return int(n) % 2


def classify(p: PolarElastic, tol: float | None = None) -> SymmetryClass:
    tol = default_tol() if tol is None else tol
    eps = tol * max(p.scale, 1e-300)
    iso0, iso1 = p.R0 <= eps, p.R1 <= eps
    if iso0 and iso1:
        return SymmetryClass(Symmetry.ISOTROPIC, tol=tol)
    if iso0:
        return SymmetryClass(Symmetry.R0_ORTHOTROPIC, tol=tol)
    if iso1:
        return SymmetryClass(Symmetry.SQUARE_SYMMETRIC, tol=tol)
    # angular tolerance: the relative tol, scaled up for weak anisotropy
    ang_tol = tol * max(p.scale, 1e-300) / min(p.R0, p.R1)
    k = orthotropy_branch(p.Phi0 - p.Phi1, ang_tol)
    if k is not None:
        return SymmetryClass(Symmetry.ORDINARY_ORTHOTROPIC, k=k, tol=tol)
    return SymmetryClass(Symmetry.GENERAL, tol=tol)


@dataclass(frozen=True)
class BoundsReport:
    kind: str
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def bounds_check(p: PolarElastic, kind: str = "stiffness") -> BoundsReport:
    """Check the polar admissibility bounds. ``kind`` is "stiffness" or "coupling".

    Coupling tensors may be indefinite, so only R0, R1 >= 0 applies to them.
    """
    if kind not in ("stiffness", "coupling"):
        raise ValueError(f"unknown bounds kind {kind!r}")
    bad = []
    if kind == "stiffness":
        if not p.T0 - p.R0 > 0:
            bad.append("T0 - R0 > 0")
        lhs = p.T1 * (p.T0**2 - p.R0**2) - 2 * p.R1**2 * (p.T0 - p.R0 * math.cos(4 * (p.Phi0 - p.Phi1)))
        if not lhs > 0:
            bad.append("T1 (T0^2 - R0^2) - 2 R1^2 [T0 - R0 cos4(Phi0 - Phi1)] > 0")
    if p.R0 < 0:
        bad.append("R0 >= 0")
    if p.R1 < 0:
        bad.append("R1 >= 0")
    return BoundsReport(kind, tuple(bad))
