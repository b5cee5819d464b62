"""Reduced calB-symmetry conditions for structured laminates.

Each case bundles a structural precondition with the residual(s) of the
reduced condition. On inputs meeting the precondition the residuals vanish
exactly when calB is symmetric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..config import default_tol
from ..errors import CaseNotApplicable
from ..kelvin import is_singular
from ..laminate import LaminateTensors
from ..polar import HALF_PI, PolarElastic, Symmetry, classify, from_cartesian_gen
from .conditions import c_conditions, shift_angles


@dataclass(frozen=True)
class CaseResidual:
    case: str
    values: np.ndarray
    scales: np.ndarray

    @property
    def normalized(self) -> np.ndarray:
        return self.values / self.scales

    @property
    def max_normalized(self) -> float:
        return float(np.max(np.abs(self.normalized)))

    def satisfied(self, tol: float | None = None) -> bool:
        return self.max_normalized < (default_tol() if tol is None else tol)


@dataclass(frozen=True)
class SpecialCase:
    name: str
    summary: str
    precondition: Callable[[LaminateTensors, float], str | None]
    residual: Callable[[LaminateTensors, float], tuple[np.ndarray, np.ndarray]]


def _kind(p: PolarElastic, tol: float) -> Symmetry:
    return classify(p, tol).kind


def _small(x: float, ref: float, tol: float) -> bool:
    return abs(x) <= tol * max(ref, 1e-300)


def _ortho_k(p: PolarElastic, tol: float) -> int | None:
    c = classify(p, tol)
    return c.k if c.kind is Symmetry.ORDINARY_ORTHOTROPIC else None


def _coaxial_h(delta: float | None, tol: float) -> int | None:
    """h in {0, 1} when delta is a multiple of pi/2 (within tol)."""
    if delta is None:
        return None
    q = delta / HALF_PI
    n = round(q)
    return int(n) % 2 if abs(q - n) * HALF_PI <= tol else None


def _angle_tol(tol: float) -> float:
    return max(tol, 1e-12) * 10


def _needs_identical(lt: LaminateTensors) -> str | None:
    return None if lt.identical_ply and lt.ply is not None else "needs identical plies"


# ---- orthotropic, co-axial A, B, D -------------------------------------------

def _ortho_coaxial_pre(lt, tol):
    if (r := _needs_identical(lt)):
        return r
    ks = [_ortho_k(p, tol) for p in (lt.polar_A, lt.polar_B, lt.polar_D)]
    if None in ks:
        return "A, B and D must all be ordinarily orthotropic"
    s = shift_angles(lt.polar_A, lt.polar_B, lt.polar_D, "general")
    if _coaxial_h(s.deltaA, _angle_tol(tol)) is None or _coaxial_h(s.deltaD, _angle_tol(tol)) is None:
        return "orthotropy axes of A, B, D must coincide"
    return None


def _ortho_coaxial_res(lt, tol):
    pA, pB, pD = lt.polar_A, lt.polar_B, lt.polar_D
    kA, kB, kD = (_ortho_k(p, tol) for p in (pA, pB, pD))
    s = shift_angles(pA, pB, pD, "general")
    hA, hD = _coaxial_h(s.deltaA, _angle_tol(tol)), _coaxial_h(s.deltaD, _angle_tol(tol))
    sg = lambda k: -1.0 if k else 1.0
    val = (sg(kA) * pA.R0 - sg(kD) * pD.R0) * pB.R1 - sg(kB) * pB.R0 * (sg(hA) * pA.R1 - sg(hD) * pD.R1)
    scale = (pA.R0 + pD.R0) * pB.R1 + pB.R0 * (pA.R1 + pD.R1)
    return np.array([val]), np.array([scale])


# ---- isotropic A, orthotropic D ------------------------------------------------

def _iso_ortho_pre(lt, tol):
    if (r := _needs_identical(lt)):
        return r
    if _kind(lt.polar_A, tol) is not Symmetry.ISOTROPIC:
        return "A must be isotropic"
    if _ortho_k(lt.polar_D, tol) is None:
        return "D must be ordinarily orthotropic"
    pB = lt.polar_B
    if not (pB.phi0_defined and pB.phi1_defined) or is_singular(lt.B):
        return "B must be invertible with R0B, R1B > 0"
    return None


def _iso_ortho_res(lt, tol):
    """Reduced C1 plus C2, C3.

    C2 and C3 vanish identically only when B is also orthotropic and co-axial
    with D; in general they are kept as explicit residuals.
    """
    pA, pB, pD = lt.polar_A, lt.polar_B, lt.polar_D
    kD = _ortho_k(pD, tol)
    s = shift_angles(pA, pB, pD, "general")
    sgD = -1.0 if kD else 1.0
    reduced = (sgD * pD.R0 * pB.R1 * math.cos(4 * (s.deltaD - s.PhiB))
               - pB.R0 * pD.R1 * math.cos(2 * s.deltaD))
    c = c_conditions(pA, pB, pD, lt.ply.T0, lt.ply.T1)
    a, b, d = (np.asarray(x) for x in (lt.A, lt.B, lt.D))
    h_scale = float(np.linalg.norm(d @ np.linalg.solve(b, a)))
    return (np.array([reduced, c[1], c[2]]),
            np.array([pD.R0 * pB.R1 + pB.R0 * pD.R1, h_scale, h_scale]))


# ---- A = D --------------------------------------------------------------------

def _qhcl_pre(lt, tol):
    if not lt.A_equals_D:
        return "A and D must coincide"
    return None


def _qhcl_res(lt, tol):
    diff = np.linalg.norm(np.asarray(lt.A) - np.asarray(lt.D))
    return np.array([diff]), np.array([np.linalg.norm(np.asarray(lt.A))])


# ---- all R1 = 0 -----------------------------------------------------------------

def _square_pre(lt, tol):
    ps = (lt.polar_A, lt.polar_B, lt.polar_D)
    if any(not _small(p.R1, p.scale, tol) for p in ps):
        return "R1 of A, B and D must vanish"
    if not lt.polar_B.phi0_defined:
        return "R0B must be nonzero"
    return None


def _square_res(lt, tol):
    pA, pB, pD = lt.polar_A, lt.polar_B, lt.polar_D
    s = shift_angles(pA, pB, pD, "square")
    dA, dD = s.deltaA or 0.0, s.deltaD or 0.0
    val = (pA.R0 * pB.R0 * pD.T0 * math.sin(4 * dA) - pB.R0 * pD.R0 * pA.T0 * math.sin(4 * dD)
           - pA.R0 * pD.R0 * pB.T0 * math.sin(4 * (dA - dD)))
    scale = pB.R0 * max(pA.T0, pD.T0) * (pA.R0 + pD.R0) + pA.R0 * pD.R0 * abs(pB.T0)
    return np.array([val]), np.array([max(scale, 1e-300)])


# ---- all R0 = 0 -----------------------------------------------------------------

def _r0_pre(lt, tol):
    ps = (lt.polar_A, lt.polar_B, lt.polar_D)
    if any(not _small(p.R0, p.scale, tol) for p in ps):
        return "R0 of A, B and D must vanish"
    if not lt.polar_B.phi1_defined:
        return "R1B must be nonzero"
    return None


def r0_orthotropic_conditions(pA: PolarElastic, pB: PolarElastic, pD: PolarElastic) -> np.ndarray:
    s = shift_angles(pA, pB, pD, "r0")
    dA, dD = s.deltaA or 0.0, s.deltaD or 0.0
    T0A, T1A, R1A = pA.T0, pA.T1, pA.R1
    T0B, T1B, R1B = pB.T0, pB.T1, pB.R1
    T0D, T1D, R1D = pD.T0, pD.T1, pD.R1
    sin, cos = math.sin, math.cos
    c1 = (R1A * (T0B * T1D - T0D * T1B) * cos(2 * dA) + R1D * (T0A * T1B - T0B * T1A) * cos(2 * dD)
          - R1B * (T0A * T1D - T0D * T1A))
    c2 = (R1A * (2 * R1B**2 * T0D - R1B * T0B * T0D + T0B * (T0B * T1D - T0D * T1B)) * sin(2 * dA)
          + R1D * (R1B * T0A * T0B - 2 * R1B**2 * T0A - T0B * (T0B * T1A - T0A * T1B)) * sin(2 * dD)
          - R1A * R1D * T0B * (2 * R1B - T0B) * sin(2 * (dA - dD)))
    c3 = (R1A * (2 * R1B**2 * T0D + R1B * T0B * T0D + T0B * (T0B * T1D - T0D * T1B)) * sin(2 * dA)
          - R1D * (R1B * T0A * T0B + 2 * R1B**2 * T0A + T0B * (T0B * T1A - T0A * T1B)) * sin(2 * dD)
          - R1A * R1D * T0B * (2 * R1B + T0B) * sin(2 * (dA - dD)))
    return np.array([c1, c2, c3])


def _r0_res(lt, tol):
    pA, pB, pD = lt.polar_A, lt.polar_B, lt.polar_D
    t = max(pA.T0, pA.T1, pD.T0, pD.T1)
    r = max(pA.R1, pB.R1, pD.R1)
    b = pB.R1 + abs(pB.T0) + abs(pB.T1)
    return r0_orthotropic_conditions(pA, pB, pD), np.array([r * t * t, r * t * b * b, r * t * b * b])


# ---- isotropic plies ------------------------------------------------------------

def _hybrid_iso_pre(lt, tol):
    for name, p in (("A", lt.polar_A), ("B", lt.polar_B), ("D", lt.polar_D)):
        if not (_small(p.R0, p.scale, tol) and _small(p.R1, p.scale, tol)):
            return f"{name} must be isotropic (all plies isotropic)"
    return None


def isotropic_coupling_compliance(pA: PolarElastic, pB: PolarElastic, pD: PolarElastic) -> tuple[float, float]:
    """(t0, t1) of calB when A, B, D are all isotropic."""
    t0 = 0.75 * pB.T0 / (3 * pB.T0**2 - pA.T0 * pD.T0)
    t1 = 3 / 16 * pB.T1 / (3 * pB.T1**2 - pA.T1 * pD.T1)
    return t0, t1


def _hybrid_iso_res(lt, tol):
    t0, t1 = isotropic_coupling_compliance(lt.polar_A, lt.polar_B, lt.polar_D)
    pred = np.array([[t0 + 2 * t1, -t0 + 2 * t1, 0.0], [-t0 + 2 * t1, t0 + 2 * t1, 0.0], [0.0, 0.0, 2 * t0]])
    cal_b = np.asarray(lt.calB)
    scale = max(np.linalg.norm(cal_b), np.linalg.norm(pred), 1e-300)
    return (cal_b - pred).ravel(), np.full(9, scale)


SPECIAL_CASES: dict[str, SpecialCase] = {c.name: c for c in (
    SpecialCase("orthotropic_coaxial", "identical plies; A, B, D orthotropic with common axes",
                _ortho_coaxial_pre, _ortho_coaxial_res),
    SpecialCase("extension_isotropic_bending_orthotropic", "identical plies; A isotropic, D orthotropic",
                _iso_ortho_pre, _iso_ortho_res),
    SpecialCase("quasi_homogeneous_coupled", "A = D; calB symmetric for any B", _qhcl_pre, _qhcl_res),
    SpecialCase("square_symmetric", "R1 of A, B, D all zero (hybrid or identical plies)",
                _square_pre, _square_res),
    SpecialCase("r0_orthotropic", "R0 of A, B, D all zero (hybrid or identical plies)", _r0_pre, _r0_res),
    SpecialCase("hybrid_isotropic", "all plies isotropic; calB isotropic with closed-form t0, t1",
                _hybrid_iso_pre, _hybrid_iso_res),
)}


def special_case_bsym(lt: LaminateTensors, case: str, tol: float | None = None) -> CaseResidual:
    tol = default_tol() if tol is None else tol
    try:
        spec = SPECIAL_CASES[case]
    except KeyError:
        raise CaseNotApplicable(f"unknown case {case!r}; have {sorted(SPECIAL_CASES)}") from None
    reason = spec.precondition(lt, tol)
    if reason is not None:
        raise CaseNotApplicable(f"{case}: {reason}")
    values, scales = spec.residual(lt, tol)
    return CaseResidual(case, np.asarray(values, dtype=float), np.asarray(scales, dtype=float))


def applicable_cases(lt: LaminateTensors, tol: float | None = None) -> list[str]:
    tol = default_tol() if tol is None else tol
    return [name for name, c in SPECIAL_CASES.items() if c.precondition(lt, tol) is None]


def match_special_case(lt: LaminateTensors, tol: float | None = None) -> str | None:
    """First applicable case whose residual vanishes, else the first applicable case."""
    names = applicable_cases(lt, tol)
    for name in names:
        if special_case_bsym(lt, name, tol).satisfied(tol):
            return name
    return names[0] if names else None


# ---- rari-constancy of calB --------------------------------------------------

@dataclass(frozen=True)
class RariReport:
    t0_minus_t1: float  # (t0 - t1) / (|t0| + |t1|) of calB
    square_residual: float | None  # R0A cos4dA + R0D cos4dD, scaled, for R1 = 0 laminates

    def rari_constant(self, tol: float | None = None) -> bool:
        return abs(self.t0_minus_t1) < (default_tol() if tol is None else tol)


def rari_constancy(lt: LaminateTensors, tol: float | None = None) -> RariReport:
    """Whether calB has the Cauchy-Poisson symmetry (t0 = t1)."""
    tol = default_tol() if tol is None else tol
    g = from_cartesian_gen(lt.calB, tol)
    denom = abs(g.t0) + abs(g.t1)
    rel = 0.0 if denom == 0 else (g.t0 - g.t1) / denom
    sq = None
    if lt.identical_ply and _square_pre(lt, tol) is None:
        pA, pB, pD = lt.polar_A, lt.polar_B, lt.polar_D
        s = shift_angles(pA, pB, pD, "square")
        dA, dD = s.deltaA or 0.0, s.deltaD or 0.0
        sq = (pA.R0 * math.cos(4 * dA) + pD.R0 * math.cos(4 * dD)) / max(pA.R0 + pD.R0, 1e-300)
    return RariReport(float(rel), sq)
