"""Structure of the coupling tensors: decomposition, singularity and shape."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from ..config import default_tol
from ..errors import NotIdenticalPly
from ..kelvin import SQRT2, Tensor4Gen, Tensor4Sym, det, is_singular, rotate, singular_threshold
from ..laminate import LaminateTensors, lamination_parameters
from ..polar import PolarElastic, PolarGeneral, from_cartesian_gen, orthotropy_branch, to_cartesian_gen


# ---- elastic + complementary split of calB --------------------------------

def decompose_calB(cal_b, tol: float | None = None) -> tuple[Tensor4Sym, Tensor4Gen]:
    """Split calB into an elastic-type tensor and a complementary remainder.

    The elastic part keeps (t0, t1, r0, r1, phi0, phi1) and sets t3 = 0,
    r2 = r1, phi2 = phi1. The remainder then has t0 = t1 = r0 = r1 = 0 and
    depends only on t3 and the difference of the r1 and r2 terms, so its
    Kelvin entries satisfy ``Bc66 = 0`` and ``Bc61 = -Bc62 = sqrt2 t3``.
    This differs from the symmetric part (m + m^T)/2 whenever r1 != r2.
    """
    g = from_cartesian_gen(cal_b, tol)
    elastic = PolarGeneral(g.t0, g.t1, 0.0, g.r0, g.r1, g.r1, g.phi0, g.phi1, g.phi1,
                           g.phi0_defined, g.phi1_defined, g.phi1_defined)
    units = getattr(cal_b, "units", "")
    be = to_cartesian_gen(elastic)
    be_sym = Tensor4Sym(np.asarray(be), units)
    bc = Tensor4Gen(np.asarray(cal_b, dtype=float) - np.asarray(be_sym), units)
    return be_sym, bc


def complementary_components(g: PolarGeneral) -> np.ndarray:
    """Kelvin matrix of the complementary part built from the nine parameters."""
    z = (g.r2 * complex(math.cos(2 * g.phi2), math.sin(2 * g.phi2))
         - g.r1 * complex(math.cos(2 * g.phi1), math.sin(2 * g.phi1)))
    c, s = z.real, z.imag  # r2' cos 2phi2', r2' sin 2phi2'
    t3 = g.t3
    return np.array([
        [2 * c, -2 * c, SQRT2 * (-t3 + 2 * s)],
        [2 * c, -2 * c, SQRT2 * (t3 + 2 * s)],
        [SQRT2 * t3, -SQRT2 * t3, 0.0],
    ])


# ---- singularity of B ---------------------------------------------------------

class SingularityCause(enum.Enum):
    NONE = "none"
    B_ZERO = "B_zero"
    R1B_ZERO = "R1B_zero"
    R0B_ZERO = "R0B_zero"
    PHIB_EIGHTH_PI = "PhiB_eighth_pi"
    ORTHOTROPIC_RELATION = "orthotropic_relation"
    ISOTROPIC_PRODUCT = "isotropic_product"
    GENERAL_RELATION = "general_relation"


@dataclass(frozen=True)
class SingularityVerdict:
    singular: bool
    cause: SingularityCause
    det_matrix: float
    det_polar: float
    threshold: float

    def as_dict(self) -> dict:
        return {"singular": self.singular, "cause": self.cause.value, "det_matrix": self.det_matrix,
                "det_polar": self.det_polar, "threshold": self.threshold}


def polar_determinant(p: PolarElastic) -> float:
    """det of the Kelvin matrix from polar parameters."""
    return 16 * (p.T1 * (p.T0**2 - p.R0**2) - 2 * p.R1**2 * (p.T0 - p.R0 * math.cos(4 * (p.Phi0 - p.Phi1))))


def singularity(lt: LaminateTensors, tol: float | None = None) -> SingularityVerdict:
    tol = default_tol() if tol is None else tol
    p = lt.polar_B
    dm, dp = det(lt.B), polar_determinant(p)
    thr = singular_threshold(lt.B)
    singular = is_singular(lt.B)
    if not singular:
        return SingularityVerdict(False, SingularityCause.NONE, dm, dp, thr)
    scale = float(np.linalg.norm(np.asarray(lt.A)))
    small = lambda x: abs(x) <= tol * scale
    if small(float(np.linalg.norm(np.asarray(lt.B)))):
        cause = SingularityCause.B_ZERO
    elif lt.identical_ply:
        if small(p.R1):
            cause = SingularityCause.R1B_ZERO
        elif small(p.R0):
            cause = SingularityCause.R0B_ZERO
        else:
            cause = SingularityCause.PHIB_EIGHTH_PI
    elif small(p.R0) and small(p.R1):
        cause = SingularityCause.ISOTROPIC_PRODUCT
    elif p.phi0_defined and p.phi1_defined and _near_quarter(p.Phi0 - p.Phi1, tol):
        cause = SingularityCause.ORTHOTROPIC_RELATION
    else:
        cause = SingularityCause.GENERAL_RELATION
    return SingularityVerdict(True, cause, dm, dp, thr)


def _near_quarter(x: float, tol: float) -> bool:
    q = x / (math.pi / 4)
    return abs(q - round(q)) * math.pi / 4 <= max(tol, 1e-12) * 10


# ---- shapes ----------------------------------------------------------------------

class BShape(enum.Enum):
    ZERO = "Zero"
    ANGLE_PLY_SHEAR = "AnglePlyShear"
    CROSS_PLY_DIAGONAL = "CrossPlyDiagonal"
    IN_PLANE_BLOCK = "InPlaneBlock"
    SQUARE_SYMMETRIC = "SquareSymmetricShape"
    R0_ORTHO = "R0OrthoShape"
    FULL = "Full"


# zero slots (row, col) and linear relations sum(coef * m[i, j]) = 0
_PATTERNS = (
    (BShape.ANGLE_PLY_SHEAR, [(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)],
     [{(0, 2): 1, (1, 2): 1}, {(0, 2): 1, (2, 0): -1}, {(1, 2): 1, (2, 1): -1}]),
    (BShape.CROSS_PLY_DIAGONAL, [(0, 1), (1, 0), (0, 2), (1, 2), (2, 0), (2, 1), (2, 2)],
     [{(0, 0): 1, (1, 1): 1}]),
    (BShape.IN_PLANE_BLOCK, [(0, 2), (1, 2), (2, 0), (2, 1), (2, 2)], []),
    # R1 = 0: m11 = m22 = -m12, m66 = -2 m11, m16 = -m26
    (BShape.SQUARE_SYMMETRIC, [],
     [{(0, 0): 1, (1, 1): -1}, {(0, 0): 1, (0, 1): 1}, {(2, 2): 1, (0, 0): 2}, {(0, 2): 1, (1, 2): 1},
      {(0, 1): 1, (1, 0): -1}, {(0, 2): 1, (2, 0): -1}, {(1, 2): 1, (2, 1): -1}]),
    # R0 = 0 and rari-constant: m11 = -m22, m12 = m66 = 0, m16 = m26
    (BShape.R0_ORTHO, [(0, 1), (1, 0), (2, 2)],
     [{(0, 0): 1, (1, 1): 1}, {(0, 2): 1, (1, 2): -1}, {(0, 2): 1, (2, 0): -1}, {(1, 2): 1, (2, 1): -1}]),
)


def shape_of(m, tol: float | None = None) -> BShape:
    tol = default_tol() if tol is None else tol
    a = np.asarray(m, dtype=float)
    norm = float(np.linalg.norm(a))
    if norm == 0.0:
        return BShape.ZERO
    eps = tol * norm
    for shape, zeros, relations in _PATTERNS:
        if all(abs(a[i, j]) <= eps for i, j in zeros) and all(
            abs(sum(c * a[ij] for ij, c in rel.items())) <= eps for rel in relations
        ):
            return shape
    return BShape.FULL


def coupling_from_lamination(xi5: float, xi6: float, xi7: float, rho: float, R0: float, k: int) -> np.ndarray:
    """B of an identical-ply laminate from three lamination parameters.

    Valid in the frame where Phi1 of B is zero (so xi8 = 0). The basic ply is
    ordinarily orthotropic with branch k and anisotropy ratio rho = R1/R0.
    """
    sg = -1.0 if k % 2 else 1.0
    return sg * R0 * np.array([
        [xi5 + 4 * sg * rho * xi7, -xi5, SQRT2 * xi6],
        [-xi5, xi5 - 4 * sg * rho * xi7, -SQRT2 * xi6],
        [SQRT2 * xi6, -SQRT2 * xi6, -2 * xi5],
    ])


@dataclass(frozen=True)
class ShapeReport:
    B: BShape
    calB: BShape
    same_shape: bool
    reconstruction_residual: float | None  # lamination-parameter rebuild of B vs homogenized B

    def as_dict(self) -> dict:
        return {"B": self.B.value, "calB": self.calB.value, "same_shape": self.same_shape,
                "reconstruction_residual": self.reconstruction_residual}


def reconstruct_coupling(lt: LaminateTensors) -> tuple[np.ndarray, np.ndarray]:
    """(B rebuilt from xi5, xi6, xi7, rho, R0 ; homogenized B) in the frame Phi1B = 0."""
    if lt.stack is None or not lt.identical_ply:
        raise NotIdenticalPly("reconstruction from lamination parameters needs an identical-ply stack")
    ply = lt.ply
    if ply.R0 == 0:
        raise NotIdenticalPly("the lamination-parameter form of B needs R0 > 0 for the basic ply")
    k = orthotropy_branch(ply.Phi0 - ply.Phi1, 1e-9) if ply.R1 > 0 else 0
    if k is None:
        raise NotIdenticalPly("the lamination-parameter form of B needs an orthotropic basic ply")
    frame = lt.polar_B.Phi1 if lt.polar_B.phi1_defined else 0.0
    # the ply's own axes are absorbed into the orientations
    stack = lt.stack.rotated(ply.Phi1 - frame)
    xi = lamination_parameters(stack).xi
    rebuilt = coupling_from_lamination(xi[4], xi[5], xi[6], ply.R1 / ply.R0, ply.R0, k)
    return rebuilt, np.asarray(rotate(lt.B, frame))


def shape_classify(lt: LaminateTensors, tol: float | None = None) -> ShapeReport:
    tol = default_tol() if tol is None else tol
    scale = float(np.linalg.norm(np.asarray(lt.A)))
    b = np.asarray(lt.B)
    b_shape = BShape.ZERO if np.linalg.norm(b) <= tol * scale else shape_of(b, tol)
    cb = np.asarray(lt.calB)
    cal_scale = float(np.linalg.norm(np.asarray(lt.calA)))
    cb_shape = BShape.ZERO if np.linalg.norm(cb) <= tol * cal_scale else shape_of(cb, tol)
    resid = None
    if lt.identical_ply and lt.stack is not None and lt.ply is not None and lt.ply.R0 > 0:
        try:
            rebuilt, actual = reconstruct_coupling(lt)
        except NotIdenticalPly:
            pass
        else:
            resid = float(np.linalg.norm(rebuilt - actual) / max(np.linalg.norm(actual), tol * scale))
    return ShapeReport(b_shape, cb_shape, b_shape == cb_shape, resid)
