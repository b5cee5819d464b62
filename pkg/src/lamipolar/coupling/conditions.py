"""When is the compliance coupling calB symmetric?

With B invertible, ``calB = calB^T`` holds exactly when
``H = D B^-1 A - A B^-1 D`` vanishes. H is always skew, so three scalars
(H12, H13, H23) decide the matter. For identical plies they have closed forms
C1, C2, C3 in the polar parameters of A, B, D and the basic ply, written with
the shift angles measured from B.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..config import default_tol
from ..kelvin import invert, is_singular, rotate, skew_residual
from ..laminate import LaminateTensors
from ..polar import HALF_PI, PolarElastic, wrap


@dataclass(frozen=True)
class ShiftAngles:
    """Angles of A and D relative to B plus each tensor's own Phi0 - Phi1.

    mode "general": deltas on Phi1, Phi_X = Phi0_X - Phi1_X.
    mode "square": all R1 vanish; deltas on Phi0 and Phi_X = Phi0_X.
    mode "r0": all R0 vanish; deltas on Phi1 and Phi_X = Phi1_X.
    Undefined entries are None.
    """

    deltaA: float | None
    deltaD: float | None
    PhiA: float | None
    PhiB: float | None
    PhiD: float | None
    mode: str = "general"


def _diff(a: float, a_ok: bool, b: float, b_ok: bool, period: float) -> float | None:
    return wrap(a - b, period) if a_ok and b_ok else None


def shift_angles(pA: PolarElastic, pB: PolarElastic, pD: PolarElastic, mode: str | None = None) -> ShiftAngles:
    if mode is None:
        if not (pA.phi1_defined or pB.phi1_defined or pD.phi1_defined):
            mode = "square"
        elif not (pA.phi0_defined or pB.phi0_defined or pD.phi0_defined):
            mode = "r0"
        else:
            mode = "general"
    if mode == "square":
        return ShiftAngles(
            _diff(pA.Phi0, pA.phi0_defined, pB.Phi0, pB.phi0_defined, HALF_PI),
            _diff(pD.Phi0, pD.phi0_defined, pB.Phi0, pB.phi0_defined, HALF_PI),
            pA.Phi0 if pA.phi0_defined else None,
            pB.Phi0 if pB.phi0_defined else None,
            pD.Phi0 if pD.phi0_defined else None,
            mode,
        )
    if mode not in ("general", "r0"):
        raise ValueError(f"unknown shift-angle mode {mode!r}")

    def own(p: PolarElastic) -> float | None:
        if mode == "r0":
            return p.Phi1 if p.phi1_defined else None
        return _diff(p.Phi0, p.phi0_defined, p.Phi1, p.phi1_defined, HALF_PI)

    return ShiftAngles(
        _diff(pA.Phi1, pA.phi1_defined, pB.Phi1, pB.phi1_defined, math.pi),
        _diff(pD.Phi1, pD.phi1_defined, pB.Phi1, pB.phi1_defined, math.pi),
        own(pA), own(pB), own(pD), mode,
    )


def h_tensor(A, B, D) -> np.ndarray:
    """``D B^-1 A - A B^-1 D``; raises SingularMatrix if B is singular."""
    a, d = np.asarray(A, dtype=float), np.asarray(D, dtype=float)
    b_inv = np.asarray(invert(np.asarray(B, dtype=float), "B"))
    b_inv = 0.5 * (b_inv + b_inv.T)
    return d @ b_inv @ a - a @ b_inv @ d


def c_conditions(pA: PolarElastic, pB: PolarElastic, pD: PolarElastic, T0: float, T1: float) -> np.ndarray:
    """Closed forms (C1, C2, C3) for identical plies with basic moduli T0, T1.

    They equal (H12, H13, H23) in the frame where Phi1 of B is zero, so they
    vanish together with the skew part of calB. Requires R0B, R1B and
    cos 4(Phi0B - Phi1B) nonzero.
    """
    s = shift_angles(pA, pB, pD, "general")
    R0A, R1A, R0B, R1B, R0D, R1D = pA.R0, pA.R1, pB.R0, pB.R1, pD.R0, pD.R1
    # undefined angles only occur with a vanishing modulus; any value works there
    dA = s.deltaA or 0.0
    dD = s.deltaD or 0.0
    PA, PB, PD = s.PhiA or 0.0, s.PhiB or 0.0, s.PhiD or 0.0
    sin, cos = math.sin, math.cos
    den = R0B * R1B**2 * cos(4 * PB)

    c1 = 2 / den * (
        R0B**2 * T1 * (R1A * cos(2 * dA) - R1D * cos(2 * dD))
        + R1B * (
            2 * R0A * R1B * R1D * sin(4 * (dA + PA)) * sin(2 * dD)
            + 2 * R0B * R1A * R1D * sin(2 * (dA - dD)) * sin(4 * PB)
            - 2 * R0D * R1A * R1B * sin(2 * dA) * sin(4 * (dD + PD))
            + R0B * T1 * (R0D * cos(4 * (dD + PD - PB)) - R0A * cos(4 * (dA + PA - PB)))
        )
    )
    # the two coupling-angle groups shared by C2 and C3
    even = (
        R1A * (2 * R1B**2 * T0 - R0B**2 * T1) * sin(2 * dA)
        + T1 * R0B**2 * R1D * sin(2 * dD)
        - 2 * T0 * R1B**2 * R1D * sin(2 * dD)
        + 2 * R0A * R1B**2 * R1D * sin(2 * dD) * cos(4 * (dA + PA))
        + 2 * R0B * R1A * R1B * R1D * sin(2 * (dA - dD)) * cos(4 * PB)
        + T1 * R0B * R1B * (R0A * sin(4 * (dA + PA - PB)) - R0D * sin(4 * (dD + PD - PB)))
        - 2 * R0D * R1A * R1B**2 * sin(2 * dA) * cos(4 * (dD + PD))
    )
    odd = (
        -T0 * R1B**2 * R0A * sin(4 * (dA + PA))
        + R0B**2 * R1D * R1A * sin(2 * (dA - dD))
        + T0 * R0B * R1B * (R1D * sin(2 * (dD - 2 * PB)) - R1A * sin(2 * (dA - 2 * PB)))
        + R0D * R1B**2 * (T0 * sin(4 * (dD + PD)) - R0A * sin(4 * (dD + PD - dA - PA)))
        + R0B * R1B * (R0A * R1D * sin(2 * (dD - 2 * (dA + PA - PB)))
                       - R0D * R1A * sin(2 * (dA - 2 * (dD + PD - PB))))
    )
    c2 = math.sqrt(2) / den * (even - odd)
    c3 = math.sqrt(2) / den * (even + odd)
    return np.array([c1, c2, c3])


@dataclass(frozen=True)
class BSymReport:
    skew_residual: float
    symmetric: bool
    H_entries: tuple[float, float, float] | None = None  # (H12, H13, H23), global frame
    H_sym_residual: float | None = None
    C: tuple[float, float, float] | None = None
    C_scaled: float | None = None  # max |Ci| / ||D B^-1 A||
    C_agrees: bool | None = None
    matched_special_case: str | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)

    def as_dict(self) -> dict:
        return {
            "skew_residual": self.skew_residual,
            "symmetric": self.symmetric,
            "H_entries": list(self.H_entries) if self.H_entries else None,
            "H_sym_residual": self.H_sym_residual,
            "C": list(self.C) if self.C else None,
            "C_scaled": self.C_scaled,
            "C_agrees": self.C_agrees,
            "matched_special_case": self.matched_special_case,
            "notes": list(self.notes),
        }


def c_evaluable(lt: LaminateTensors, tol: float) -> str | None:
    """Reason the C closed forms cannot be used, or None when they can."""
    if not lt.identical_ply or lt.ply is None:
        return "closed forms C1-C3 exist only for identical plies"
    if is_singular(lt.B):
        return "B is singular, H undefined"
    pB = lt.polar_B
    scale = max(pB.R0, pB.R1)
    if pB.R0 <= tol * scale or pB.R1 <= tol * scale:
        return "R0B or R1B vanishes, C1-C3 denominators are zero"
    if abs(math.cos(4 * (pB.Phi0 - pB.Phi1))) <= tol:
        return "cos 4(Phi0B - Phi1B) vanishes, C1-C3 denominators are zero"
    return None


def bsym_conditions(lt: LaminateTensors, tol: float | None = None) -> BSymReport:
    from .special_cases import match_special_case

    tol = default_tol() if tol is None else tol
    skew = skew_residual(lt.calB)
    notes = []
    h_entries = h_sym = c_vals = c_scaled = agrees = None
    if is_singular(lt.B):
        notes.append("B is singular, H undefined; symmetry judged on calB directly")
    else:
        a, b, d = (np.asarray(x) for x in (lt.A, lt.B, lt.D))
        h = h_tensor(a, b, d)
        scale = float(np.linalg.norm(d @ np.asarray(invert(b)) @ a))
        h_entries = (float(h[0, 1]), float(h[0, 2]), float(h[1, 2]))
        h_sym = float(np.linalg.norm(0.5 * (h + h.T)) / scale)
        reason = c_evaluable(lt, tol)
        if reason is None:
            c = c_conditions(lt.polar_A, lt.polar_B, lt.polar_D, lt.ply.T0, lt.ply.T1)
            c_vals = tuple(float(x) for x in c)
            c_scaled = float(np.max(np.abs(c)) / scale)
            agrees = (c_scaled < tol) == (skew < tol)
        else:
            notes.append(reason)
    case = match_special_case(lt, tol)
    return BSymReport(skew, skew < tol, h_entries, h_sym, c_vals, c_scaled, agrees, case, tuple(notes))


def h_in_coupling_frame(lt: LaminateTensors) -> np.ndarray:
    """(H12, H13, H23) in the frame where Phi1 of B is zero; comparable to C1..C3."""
    th = lt.polar_B.Phi1
    a, b, d = (rotate(np.asarray(x), th) for x in (lt.A, lt.B, lt.D))
    h = h_tensor(a, b, d)
    return np.array([h[0, 1], h[0, 2], h[1, 2]])
