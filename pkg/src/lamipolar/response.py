"""Plate response to membrane and bending loads.

Strains and curvatures follow the inverse constitutive law written with the
normalized compliance tensors::

    eps   = (1/h) calA N + (2/h^2) calB M
    kappa = (2/h^2) calB^T N + (12/h^3) calD M

Curvatures are Kelvin vectors, so kappa6 = sqrt2 * kappa12. The deflected
surface is the small-deflection quadratic of uniform curvature,
``w = -(kappa1 x^2 + 2 kappa12 x y + kappa2 y^2) / 2``, centred on the plate
with w(0, 0) = 0. Positive kappa1 therefore bends the plate downward away from
the centre.
"""

from __future__ import annotations

import io
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import UnitsMismatch
from .kelvin import SQRT2, Vec3K, rotate
from .laminate import LaminateTensors

_ULPS_FOR_ZERO = 4


def _length_unit(units: str | None) -> str | None:
    if not units or "," not in units:
        return None
    return units.split(",")[-1].strip() or None


@dataclass(frozen=True)
class LoadCase:
    """Resultant forces N (force/length) and moments M (force), Kelvin components.

    ``h`` overrides the laminate thickness; ``frame`` (radians) expresses the
    loads in axes turned counter-clockwise by that angle from the global ones.
    ``units`` such as ``"N,mm"`` is checked against the laminate length unit.
    """

    N: Vec3K
    M: Vec3K
    Lx: float = 1.0
    Ly: float = 1.0
    h: float | None = None
    frame: float = 0.0
    units: str | None = None

    def __post_init__(self):
        for name in ("N", "M"):
            v = getattr(self, name)
            if not isinstance(v, Vec3K):
                object.__setattr__(self, name, Vec3K.of(v))
        for name in ("Lx", "Ly"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.h is not None and not self.h > 0:
            raise ValueError("h must be positive")

    @classmethod
    def membrane(cls, n1: float = 0.0, n2: float = 0.0, n6: float = 0.0, **kw) -> "LoadCase":
        return cls(Vec3K(n1, n2, n6), Vec3K(0.0, 0.0, 0.0), **kw)


@dataclass(frozen=True)
class ResponseResult:
    eps: Vec3K
    kappa: Vec3K
    gaussian_K: float
    mean_H: float

    @property
    def twist(self) -> float:
        """Tensor twist kappa12."""
        return self.kappa.c6 / SQRT2

    def mode(self, tol: float = 1e-12) -> str:
        """Short description of the deformed shape.

        One of "flat", "twist" (pure kappa12), "saddle" (H = 0, K < 0),
        "anticlastic", "synclastic" or "cylindrical".
        """
        k1, k2, k12 = self.kappa.c1, self.kappa.c2, self.twist
        scale = max(abs(k1), abs(k2), abs(k12))
        if scale == 0.0:
            return "flat"
        small = tol * scale
        if abs(k1) <= small and abs(k2) <= small:
            return "twist"
        if abs(self.mean_H) <= small:
            return "saddle"
        if abs(self.gaussian_K) <= small * scale:
            return "cylindrical"
        return "synclastic" if self.gaussian_K > 0 else "anticlastic"

    def as_dict(self) -> dict:
        return {"eps": list(self.eps), "kappa": list(self.kappa), "gaussian_K": self.gaussian_K,
                "mean_H": self.mean_H, "mode": self.mode()}


def curvature_invariants(kappa) -> tuple[float, float]:
    """(Gaussian K, mean H) of a Kelvin curvature vector.

    A sum k1 + k2 within a few ulps of max(|k1|, |k2|) is rounding noise from
    the rotation into the load frame, and H is reported as exactly zero.
    """
    k1, k2, k6 = (float(x) for x in kappa)
    k12 = k6 / SQRT2
    s = k1 + k2
    if abs(s) <= _ULPS_FOR_ZERO * sys.float_info.epsilon * max(abs(k1), abs(k2)):
        s = 0.0
    return k1 * k2 - k12 * k12, 0.5 * s


def respond(lt: LaminateTensors, lc: LoadCase) -> ResponseResult:
    lam_len, load_len = _length_unit(lt.units), _length_unit(lc.units)
    if lam_len and load_len and lam_len != load_len:
        raise UnitsMismatch(f"laminate lengths in {lam_len}, loads in {load_len}")
    h = lc.h if lc.h is not None else lt.h
    a, b, d = (np.asarray(x) for x in (lt.calA, lt.calB, lt.calD))
    if lc.frame:
        a, b, d = (np.asarray(rotate(x, lc.frame)) for x in (a, b, d))
    n, m = lc.N.v, lc.M.v
    eps = a @ n / h + 2 * (b @ m) / h**2
    kappa = 2 * (b.T @ n) / h**2 + 12 * (d @ m) / h**3
    K, H = curvature_invariants(kappa)
    return ResponseResult(Vec3K.of(eps), Vec3K.of(kappa), K, H)


# ---- deformed surface ---------------------------------------------------------

@dataclass(frozen=True)
class SurfaceMesh:
    x: np.ndarray  # (ny, nx)
    y: np.ndarray
    w: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.w.shape

    @property
    def vertex_count(self) -> int:
        return self.w.size

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        buf.write("x,y,w\n")
        for x, y, w in zip(self.x.ravel().tolist(), self.y.ravel().tolist(), self.w.ravel().tolist()):
            buf.write(f"{x!r},{y!r},{w!r}\n")
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text

    def to_obj(self, path=None) -> str:
        ny, nx = self.shape
        lines = [f"v {x!r} {y!r} {w!r}" for x, y, w in
                 zip(self.x.ravel().tolist(), self.y.ravel().tolist(), self.w.ravel().tolist())]
        for j in range(ny - 1):
            for i in range(nx - 1):
                v = j * nx + i + 1  # OBJ indices start at 1
                lines.append(f"f {v} {v + 1} {v + nx + 1} {v + nx}")
        text = "\n".join(lines) + "\n"
        if path is not None:
            Path(path).write_text(text)
        return text

    def interior_laplacian(self) -> np.ndarray:
        """Five-point Laplacian of w at interior nodes (needs a uniform grid)."""
        hx = self.x[0, 1] - self.x[0, 0]
        hy = self.y[1, 0] - self.y[0, 0]
        w = self.w
        return ((w[1:-1, 2:] - 2 * w[1:-1, 1:-1] + w[1:-1, :-2]) / hx**2
                + (w[2:, 1:-1] - 2 * w[1:-1, 1:-1] + w[:-2, 1:-1]) / hy**2)


def deflection(kappa, x, y):
    k1, k2, k6 = (float(v) for v in kappa)
    return -0.5 * (k1 * x * x + 2 * (k6 / SQRT2) * x * y + k2 * y * y)


def surface_mesh(rr: ResponseResult, lc: LoadCase, nx: int = 21, ny: int = 21) -> SurfaceMesh:
    if nx < 2 or ny < 2:
        raise ValueError("mesh needs at least 2 x 2 vertices")
    xs = np.linspace(-lc.Lx / 2, lc.Lx / 2, nx)
    ys = np.linspace(-lc.Ly / 2, lc.Ly / 2, ny)
    x, y = np.meshgrid(xs, ys)
    return SurfaceMesh(x, y, deflection(rr.kappa, x, y))


def thickness_for_curvature(lt: LaminateTensors, lc: LoadCase, target: float) -> float:
    """Thickness at which the largest curvature under ``lc`` equals ``target``.

    Valid for membrane loads only, where curvature scales as 1/h^2.
    """
    if np.any(lc.M.v):
        raise ValueError("thickness scaling needs a pure membrane load")
    h = lc.h if lc.h is not None else lt.h
    k = float(np.max(np.abs(respond(lt, lc).kappa.v)))
    return h * math.sqrt(k / target)
