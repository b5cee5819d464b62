"""Shared builders and an independent classical-lamination oracle."""

from __future__ import annotations

import math
import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from lamipolar.laminate import Ply, Stack
from lamipolar.laminate import LaminateTensors
from lamipolar.material import Material, TechnicalConstants, builtin
from lamipolar.polar import PolarElastic as P
from lamipolar.polar import to_cartesian_sym

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

SQ2 = math.sqrt(2.0)


def random_material(rng: np.random.Generator, name: str = "rand", units: str = "GPa,mm") -> Material:
    """Orthotropic ply with random but admissible engineering constants."""
    while True:
        e1 = rng.uniform(20, 200)
        e2 = rng.uniform(5, e1)
        g12 = rng.uniform(2, 12)
        nu12 = rng.uniform(0.05, 0.45)
        if 1 - nu12 * nu12 * e2 / e1 > 0.05:
            break
    return Material(name, TechnicalConstants(e1, e2, g12, nu12), float(rng.uniform(0.08, 0.3)), units)


def random_fabric(rng: np.random.Generator, name: str = "fabric") -> Material:
    e = rng.uniform(20, 80)
    return Material(name, TechnicalConstants(e, e, rng.uniform(2, 8), rng.uniform(0.03, 0.3)), 0.2, "GPa,mm")


def random_angles(rng: np.random.Generator, n: int) -> list[float]:
    return rng.uniform(-90, 90, n).round(3).tolist()


def random_identical_stack(rng: np.random.Generator, nmin: int = 2, nmax: int = 12, material=None) -> Stack:
    mat = material or random_material(rng)
    return Stack.from_angles(mat, random_angles(rng, int(rng.integers(nmin, nmax + 1))))


def random_hybrid_stack(rng: np.random.Generator, nmin: int = 2, nmax: int = 12) -> Stack:
    mats = [random_material(rng, f"m{i}") for i in range(3)]
    n = int(rng.integers(nmin, nmax + 1))
    return Stack(tuple(Ply(mats[int(rng.integers(3))], math.radians(a)) for a in random_angles(rng, n)))


# ---- independent oracle --------------------------------------------------------------
# Engineering (Voigt) algebra with the textbook transformation, then conversion to
# Kelvin form only at the end; shares no code with the package.

def voigt_q(e1, e2, g12, nu12) -> np.ndarray:
    nu21 = nu12 * e2 / e1
    d = 1 - nu12 * nu21
    return np.array([[e1 / d, nu12 * e2 / d, 0], [nu12 * e2 / d, e2 / d, 0], [0, 0, g12]])


def voigt_qbar(q: np.ndarray, theta: float) -> np.ndarray:
    """Textbook transformed reduced stiffness for a ply at angle theta (radians)."""
    c, s = math.cos(theta), math.sin(theta)
    q11, q12, q22, q66 = q[0, 0], q[0, 1], q[1, 1], q[2, 2]
    return np.array([
        [q11 * c**4 + 2 * (q12 + 2 * q66) * s * s * c * c + q22 * s**4,
         (q11 + q22 - 4 * q66) * s * s * c * c + q12 * (s**4 + c**4),
         (q11 - q12 - 2 * q66) * s * c**3 + (q12 - q22 + 2 * q66) * s**3 * c],
        [0, q11 * s**4 + 2 * (q12 + 2 * q66) * s * s * c * c + q22 * c**4,
         (q11 - q12 - 2 * q66) * s**3 * c + (q12 - q22 + 2 * q66) * s * c**3],
        [0, 0, (q11 + q22 - 2 * q12 - 2 * q66) * s * s * c * c + q66 * (s**4 + c**4)],
    ])


def _sym_upper(m):
    return np.triu(m) + np.triu(m, 1).T


VOIGT_TO_KELVIN = np.diag([1.0, 1.0, SQ2])


def kelvin_from_voigt(m: np.ndarray) -> np.ndarray:
    return VOIGT_TO_KELVIN @ m @ VOIGT_TO_KELVIN


def oracle_abd(stack: Stack) -> tuple[np.ndarray, float]:
    """Unnormalized 6x6 ABD matrix in Kelvin form and the thickness."""
    t = np.array([p.material.ply_thickness for p in stack.plies])
    h = t.sum()
    z = np.concatenate(([0.0], np.cumsum(t))) - h / 2
    big = np.zeros((6, 6))
    for k, p in enumerate(stack.plies):
        tc = p.material.source
        q = kelvin_from_voigt(_sym_upper(voigt_qbar(voigt_q(tc.E1, tc.E2, tc.G12, tc.nu12), p.angle)))
        big[:3, :3] += (z[k + 1] - z[k]) * q
        big[:3, 3:] += (z[k + 1] ** 2 - z[k] ** 2) / 2 * q
        big[3:, 3:] += (z[k + 1] ** 3 - z[k] ** 3) / 3 * q
    big[3:, :3] = big[:3, 3:].T
    return big, h


def oracle_compliance(stack: Stack) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(calA, calB, calD) recovered from the numerically inverted 6x6 matrix."""
    big, h = oracle_abd(stack)
    inv = np.linalg.inv(big)
    return inv[:3, :3] * h, inv[:3, 3:] * h**2 / 2, inv[3:, 3:] * h**3 / 12


# ---- analytic instances for the closed-form compliance cases -------------------------

PLY = P(26.88, 24.74, 19.7, 21.4)


def closed_form_instances(refs=(0.0, 0.3, -1.0), T0=26.88, T1=24.74, R0B=4.0, R0D=9.0):
    """(case, polar A, polar B, polar D, basic ply) tuples meeting each case's hypotheses."""
    out = []
    R1D = math.sqrt(T1 * R0D)
    for ref in refs:
        b_r0 = P(0, 0, R0B, 0, ref, 0, True, False)
        out += [
            ("extension_isotropic_bending_orthotropic", P(T0, T1, 0, 0), b_r0, P(T0, T1, R0D, R1D, ref, ref), PLY),
            ("extension_isotropic_bending_orthotropic", P(T0, T1, 0, 0), b_r0,
             P(T0, T1, R0D, R1D, ref, ref + math.pi / 2), PLY),
            ("square_symmetric_r1b_zero", P(T0, T1, 5, 0, ref, 0, True, False), P(0, 0, 3, 0, ref, 0, True, False),
             P(T0, T1, 8, 0, ref, 0, True, False), PLY),
            ("square_symmetric_r0b_zero", P(T0, T1, 5, 0, ref, 0, True, False), P(0, 0, 0, 3, 0, ref, False, True),
             P(T0, T1, 8, 0, ref, 0, True, False), PLY),
            ("isotropic_qhcl_r1b_zero", P(T0, T1, 0, 0), P(0, 0, R0B, 0, ref, 0, True, False), P(T0, T1, 0, 0), PLY),
            ("isotropic_qhcl_r0b_zero", P(20, 25, 0, 0), P(0, 0, 0, 4, 0, ref, False, True), P(20, 25, 0, 0),
             P(20, 25, 0, 10)),
        ]
    out.append(("hybrid_isotropic", P(T0, T1, 0, 0), P(3, 2, 0, 0), P(T0 * 1.2, T1 * 0.9, 0, 0), None))
    return out


def closed_form_laminate(A, B, D, ply) -> LaminateTensors:
    return LaminateTensors.from_tensors(to_cartesian_sym(A), to_cartesian_sym(B), to_cartesian_sym(D), ply=ply)


def rel(a, b) -> float:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def t300():
    return builtin("T300-5208")


@pytest.fixture(scope="session")
def fabric():
    return builtin("CE-fabric-gay")


# ---- acceptance report ------------------------------------------------------------------

ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(number: int, ok: bool, detail: str) -> str:
    line = f"Criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})"
    ACCEPTANCE_LINES[number] = line
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
