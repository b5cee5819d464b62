"""Closed-form compliance of structured coupled laminates.

Each evaluator predicts polar parameters of calA, calB and calD from the
polar parameters of A, B, D. The predictions serve as oracles against the
numeric block inverse. Angles are predicted in the global frame: the
reference direction is the relevant polar angle of B.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..config import default_tol
from ..errors import CaseNotApplicable
from ..kelvin import rotate
from ..laminate import LaminateTensors
from ..polar import HALF_PI, QUARTER_PI, Symmetry, classify, wrap
from .special_cases import isotropic_coupling_compliance

TENSORS = ("calA", "calB", "calD")
ANGLE_PERIOD = {"phi0": HALF_PI, "phi1": math.pi, "phi2": math.pi, "Phi0": HALF_PI, "Phi1": math.pi}


@dataclass(frozen=True)
class Prediction:
    tensor: str  # calA, calB, calD, or calB@B for components in the frame of B
    param: str  # t0, t1, t3, r0, r1, r2, phi0, phi1, phi2, or m11 .. m66
    value: float

    @property
    def is_angle(self) -> bool:
        return self.param.startswith("phi")


@dataclass(frozen=True)
class Comparison:
    prediction: Prediction
    numeric: float | None
    error: float  # relative to the tensor's largest modulus; radians for angles


@dataclass(frozen=True)
class ClosedFormCase:
    name: str
    summary: str
    precondition: Callable[[LaminateTensors, float], str | None]
    predict: Callable[[LaminateTensors], list[Prediction]]


def _iso(p, tol):
    return classify(p, tol).kind is Symmetry.ISOTROPIC


def _zero(x, ref, tol):
    return abs(x) <= tol * max(ref, 1e-300)


def _congruent(a: float, b: float, period: float, tol: float) -> bool:
    return abs(wrap(a - b, period)) <= max(tol, 1e-12) * 10


def _ply_moduli(lt: LaminateTensors) -> tuple[float, float]:
    # identical plies: the isotropic part of A equals that of the basic ply
    return lt.polar_A.T0, lt.polar_A.T1


def _identical(lt):
    return None if lt.identical_ply else "needs identical plies"


def _preds(tensor: str, **values) -> list[Prediction]:
    return [Prediction(tensor, k, float(v)) for k, v in values.items()]


# ---- isotropic QHCL ---------------------------------------------------------------

def _iso_qhcl_common(lt, tol):
    if (r := _identical(lt)):
        return r
    if not lt.A_equals_D:
        return "A and D must coincide"
    if not _iso(lt.polar_A, tol):
        return "A must be isotropic"
    return None


def _iso_qhcl_r1_pre(lt, tol):
    if (r := _iso_qhcl_common(lt, tol)):
        return r
    pB = lt.polar_B
    if not _zero(pB.R1, pB.scale, tol) or not pB.phi0_defined:
        return "B must have R1 = 0 and R0 > 0"
    return None


def _iso_qhcl_r1_predict(lt):
    T0, T1 = _ply_moduli(lt)
    pB = lt.polar_B
    den = T0**2 - 3 * pB.R0**2
    comp = dict(t0=T0 / (4 * den), t1=1 / (16 * T1), r0=0.0, r1=0.0)
    return (_preds("calA", **comp) + _preds("calD", **comp)
            + _preds("calB", t0=0.0, t1=0.0, t3=0.0, r1=0.0, r2=0.0, r0=3 * pB.R0 / (4 * den),
                     phi0=pB.Phi0 + QUARTER_PI))


def _iso_qhcl_r0_pre(lt, tol):
    if (r := _iso_qhcl_common(lt, tol)):
        return r
    pB = lt.polar_B
    if not _zero(pB.R0, pB.scale, tol) or not pB.phi1_defined:
        return "B must have R0 = 0 and R1 > 0"
    return None


def _iso_qhcl_r0_predict(lt):
    T0, T1 = _ply_moduli(lt)
    pB = lt.polar_B
    den = T0 * T1 - 6 * pB.R1**2
    comp = dict(t0=(T0 * T1 - 3 * pB.R1**2) / (4 * T0 * den), t1=T0 / (16 * den),
                r0=3 * pB.R1**2 / (4 * T0 * den), r1=0.0, phi0=pB.Phi1)
    r = 3 * pB.R1 / (8 * den)
    return (_preds("calA", **comp) + _preds("calD", **comp)
            + _preds("calB", t0=0.0, t1=0.0, t3=0.0, r0=0.0, r1=r, r2=r,
                     phi1=pB.Phi1 + HALF_PI, phi2=pB.Phi1 + HALF_PI))


# ---- isotropic A, orthotropic D with R1B = 0 and R1D^2 = T1 R0D ---------------------

def _iso_ortho_pre(lt, tol):
    if (r := _identical(lt)):
        return r
    if not _iso(lt.polar_A, tol):
        return "A must be isotropic"
    pB, pD = lt.polar_B, lt.polar_D
    if not _zero(pB.R1, pB.scale, tol) or not pB.phi0_defined:
        return "B must have R1 = 0 and R0 > 0"
    if not (pD.phi0_defined and pD.phi1_defined):
        return "D must be orthotropic with R0, R1 > 0"
    if not (_congruent(pD.Phi0, pB.Phi0, HALF_PI, tol) and _congruent(pD.Phi1, pB.Phi0, HALF_PI, tol)):
        return "D must be orthotropic (k = 0) and co-axial with B"
    _, T1 = _ply_moduli(lt)
    if not _zero(pD.R1**2 - T1 * pD.R0, T1 * pD.R0, tol * 100):
        return "needs R1D^2 = T1 R0D"
    return None


def _iso_ortho_predict(lt):
    T0, T1 = _ply_moduli(lt)
    pB, pD = lt.polar_B, lt.polar_D
    R0B, R0D = pB.R0, pD.R0
    den = T0**2 - T0 * R0D - 3 * R0B**2
    root = math.sqrt(R0D / T1)
    # entries of calB in the frame aligned with Phi0B
    sq = math.sqrt(T1 * R0D) * round(math.cos(2 * (pD.Phi1 - pB.Phi0)))
    b11 = 3 * R0B * (sq - T1) / (4 * T1 * den)
    b12 = 3 * R0B * (sq + T1) / (4 * T1 * den)
    b66 = 3 * R0B / (2 * den)
    return (_preds("calA", t0=(T0 - R0D) / (4 * den), t1=1 / (16 * T1), r0=0.0, r1=0.0)
            + _preds("calD", t0=T0 / (4 * den), t1=(T0**2 + T0 * R0D - 3 * R0B**2) / (16 * T1 * den),
                     r0=0.0, r1=T0 / (8 * den) * root, phi1=pD.Phi1 + HALF_PI)
            + _preds("calB", t0=0.0, t1=0.0, t3=0.0, r2=0.0, r0=3 * R0B / (4 * den),
                     r1=3 * R0B / (8 * den) * root, phi0=pB.Phi0 + QUARTER_PI, phi1=pD.Phi1)
            + _preds("calB@B", m11=b11, m12=b12, m21=-b11, m22=-b12, m66=b66))


# ---- square-symmetric A and D ------------------------------------------------------

def _square_common(lt, tol):
    if (r := _identical(lt)):
        return r
    pA, pD = lt.polar_A, lt.polar_D
    if not (_zero(pA.R1, pA.scale, tol) and _zero(pD.R1, pD.scale, tol)):
        return "A and D must have R1 = 0"
    if not (pA.phi0_defined and pD.phi0_defined):
        return "A and D must have R0 > 0"
    return None


def _square_r1_pre(lt, tol):
    if (r := _square_common(lt, tol)):
        return r
    pA, pB, pD = lt.polar_A, lt.polar_B, lt.polar_D
    if not _zero(pB.R1, pB.scale, tol) or not pB.phi0_defined:
        return "B must have R1 = 0 and R0 > 0"
    if not (_congruent(pA.Phi0, pB.Phi0, HALF_PI, tol) and _congruent(pD.Phi0, pB.Phi0, HALF_PI, tol)):
        return "A, B, D must be co-axial"
    return None


def _square_r1_predict(lt):
    T0, T1 = _ply_moduli(lt)
    R0A, R0B, R0D = lt.polar_A.R0, lt.polar_B.R0, lt.polar_D.R0
    mu = (3 * R0B**2 - (T0 - R0A) * (T0 - R0D)) * (3 * R0B**2 - (T0 + R0A) * (T0 + R0D))
    ang = lt.polar_B.Phi0 + QUARTER_PI
    return (_preds("calA", t0=T0 * (T0**2 - R0D**2 - 3 * R0B**2) / (4 * mu), t1=1 / (16 * T1),
                   r0=(3 * R0B**2 * R0D + R0A * (T0**2 - R0D**2)) / (4 * mu), r1=0.0, phi0=ang)
            + _preds("calB", t0=3 * T0 * R0B * (R0A + R0D) / (4 * mu), t1=0.0, t3=0.0, r1=0.0, r2=0.0,
                     r0=3 * R0B * (R0A * R0D + T0**2 - 3 * R0B**2) / (4 * mu), phi0=ang)
            + _preds("calD", t0=T0 * (T0**2 - R0A**2 - 3 * R0B**2) / (4 * mu), t1=1 / (16 * T1),
                     r0=(3 * R0B**2 * R0A + R0D * (T0**2 - R0A**2)) / (4 * mu), r1=0.0, phi0=ang))


def _square_r0_pre(lt, tol):
    if (r := _square_common(lt, tol)):
        return r
    pA, pB, pD = lt.polar_A, lt.polar_B, lt.polar_D
    if not _zero(pB.R0, pB.scale, tol) or not pB.phi1_defined:
        return "B must have R0 = 0 and R1 > 0"
    if not (_congruent(pA.Phi0, pB.Phi1, HALF_PI, tol) and _congruent(pD.Phi0, pB.Phi1, HALF_PI, tol)):
        return "A, B, D must be co-axial"
    return None


def _square_r0_predict(lt):
    T0, T1 = _ply_moduli(lt)
    R0A, R1B, R0D = lt.polar_A.R0, lt.polar_B.R1, lt.polar_D.R0
    ga = T1 * (T0 + R0A) - 6 * R1B**2
    gd = T1 * (T0 + R0D) - 6 * R1B**2
    ref = lt.polar_B.Phi1
    return (_preds("calA", t0=(T0 * T1 - 3 * R1B**2) / (4 * (T0 - R0A) * ga), t1=(T0 + R0D) / (16 * gd),
                   r0=(T1 * R0A - 3 * R1B**2) / (4 * (T0 - R0A) * ga), r1=0.0, phi0=ref + QUARTER_PI)
            + _preds("calB", t0=0.0, t1=0.0, t3=0.0, r0=0.0, r1=3 * R1B / (8 * ga), r2=3 * R1B / (8 * gd),
                     phi1=ref + HALF_PI, phi2=ref + HALF_PI)
            + _preds("calD", t0=(T0 * T1 - 3 * R1B**2) / (4 * (T0 - R0D) * gd), t1=(T0 + R0A) / (16 * ga),
                     r0=(T1 * R0D - 3 * R1B**2) / (4 * (T0 - R0D) * gd), r1=0.0, phi0=ref + QUARTER_PI))


# ---- isotropic plies of several materials -----------------------------------------

def _hybrid_iso_pre(lt, tol):
    for name in ("A", "B", "D"):
        p = getattr(lt, f"polar_{name}")
        if not (_zero(p.R0, p.scale, tol) and _zero(p.R1, p.scale, tol)):
            return f"{name} must be isotropic"
    return None


def _hybrid_iso_predict(lt):
    t0, t1 = isotropic_coupling_compliance(lt.polar_A, lt.polar_B, lt.polar_D)
    return _preds("calB", t0=t0, t1=t1, t3=0.0, r0=0.0, r1=0.0, r2=0.0)


CLOSED_FORM_CASES: dict[str, ClosedFormCase] = {c.name: c for c in (
    ClosedFormCase("isotropic_qhcl_r1b_zero", "A = D isotropic, R1B = 0", _iso_qhcl_r1_pre, _iso_qhcl_r1_predict),
    ClosedFormCase("isotropic_qhcl_r0b_zero", "A = D isotropic, R0B = 0", _iso_qhcl_r0_pre, _iso_qhcl_r0_predict),
    ClosedFormCase("extension_isotropic_bending_orthotropic",
                   "A isotropic, R1B = 0, D orthotropic co-axial with R1D^2 = T1 R0D",
                   _iso_ortho_pre, _iso_ortho_predict),
    ClosedFormCase("square_symmetric_r1b_zero", "R1 of A, B, D zero, co-axial", _square_r1_pre, _square_r1_predict),
    ClosedFormCase("square_symmetric_r0b_zero", "R1A = R1D = R0B = 0, co-axial", _square_r0_pre, _square_r0_predict),
    ClosedFormCase("hybrid_isotropic", "all plies isotropic", _hybrid_iso_pre, _hybrid_iso_predict),
)}


def compliance_special_forms(lt: LaminateTensors, case: str, tol: float | None = None) -> list[Prediction]:
    tol = default_tol() if tol is None else tol
    try:
        spec = CLOSED_FORM_CASES[case]
    except KeyError:
        raise CaseNotApplicable(f"unknown case {case!r}; have {sorted(CLOSED_FORM_CASES)}") from None
    reason = spec.precondition(lt, tol)
    if reason is not None:
        raise CaseNotApplicable(f"{case}: {reason}")
    return spec.predict(lt)


def applicable_closed_forms(lt: LaminateTensors, tol: float | None = None) -> list[str]:
    tol = default_tol() if tol is None else tol
    return [n for n, c in CLOSED_FORM_CASES.items() if c.precondition(lt, tol) is None]


def _numeric(lt: LaminateTensors, pred: Prediction) -> tuple[float | None, float]:
    """Numeric counterpart of a prediction and the scale for its relative error."""
    if pred.tensor == "calB@B":
        frame = lt.polar_B.Phi0
        m = np.asarray(rotate(lt.calB, frame))
        i, j = (int(c) - 1 if c != "6" else 2 for c in pred.param[1:])
        return float(m[i, j]), float(np.abs(m).max())
    if pred.tensor == "calB":
        g = lt.polar_calB
        if pred.is_angle:
            return (getattr(g, pred.param) if getattr(g, pred.param + "_defined") else None), 1.0
        return float(getattr(g, pred.param)), g.scale
    p = lt.polar_calA if pred.tensor == "calA" else lt.polar_calD
    name = {"t0": "T0", "t1": "T1", "r0": "R0", "r1": "R1", "phi0": "Phi0", "phi1": "Phi1"}[pred.param]
    if pred.is_angle:
        defined = p.phi0_defined if name == "Phi0" else p.phi1_defined
        return (getattr(p, name) if defined else None), 1.0
    return float(getattr(p, name)), p.scale


def compare_special_forms(lt: LaminateTensors, case: str, tol: float | None = None) -> list[Comparison]:
    out = []
    for pred in compliance_special_forms(lt, case, tol):
        num, scale = _numeric(lt, pred)
        if pred.is_angle:
            err = math.inf if num is None else abs(wrap(num - pred.value, ANGLE_PERIOD[pred.param]))
        else:
            err = abs(num - pred.value) / max(scale, 1e-300)
        out.append(Comparison(pred, num, err))
    return out


# ---- when does coupling keep calA isotropic? ---------------------------------------

def isotropy_preservation(lt: LaminateTensors, case: str) -> tuple[float, float]:
    """Normalized polynomials whose zeros give r0 = 0 and r1 = 0 for calA.

    ``case`` is "isotropic_qhcl" (A = D isotropic) or
    "extension_isotropic_bending_orthotropic" (A isotropic; B and D
    orthotropic, co-axial, with Phi0 - Phi1 = 0 for both).
    """
    T0, T1 = _ply_moduli(lt)
    pB, pD = lt.polar_B, lt.polar_D
    R0B, R1B = pB.R0, pB.R1
    scale = max(T0, T1)
    if case == "isotropic_qhcl":
        c8 = math.cos(8 * (pB.Phi0 - pB.Phi1))
        p0 = R1B * (36 * R1B**4 * T0**2 - 12 * R1B**2 * T0**3 * T1 + (9 * R0B**4 + T0**4) * T1**2
                    + 6 * R0B**2 * T0 * T1 * (T0 * T1 - 6 * R1B**2) * c8)
        p1 = R0B * R1B * (18 * R1B**4 * T0**2 + (T0**2 - 3 * R0B**2) ** 2 * T1**2
                          - 6 * R1B**2 * T0 * T1 * (T0**2 - 3 * R0B**2) * (1 - c8) - 18 * R1B**4 * T0**2 * c8)
        return p0 / scale**7, p1 / scale**8
    if case == "extension_isotropic_bending_orthotropic":
        R0D, R1D = pD.R0, pD.R1
        p0 = (6 * R1B**4 * T0 + T1 * (R0D**2 * R1B**2 - R0B**2 * R1D**2) + 2 * R0B * R1B * R1D * T0 * T1
              - R1B**2 * (3 * R0B**2 + T0**2) * T1
              + R0D * (R0B**2 * T1**2 - 6 * R1B**4 - 2 * R0B * R1B * R1D * T1))
        p1 = R1B * (T1 * R0B - 2 * R1B * R1D)
        return p0 / scale**5, p1 / scale**3
    raise CaseNotApplicable(f"unknown isotropy-preservation case {case!r}")
