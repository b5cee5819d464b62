"""Kelvin-notation algebra for plane fourth-rank tensors.

Vectors store (c1, c2, c6) with ``c6 = sqrt(2) * c12`` and matrices store
``m16 = sqrt(2) * T1112`` and ``m66 = 2 * T1212``. With this scaling the frame
rotation operator is orthogonal, so rotating a tensor is ``K m K^T``.
"""

from __future__ import annotations

import math

import numpy as np

from .config import SINGULAR_REL_THRESHOLD
from .errors import SingularMatrix

SQRT2 = math.sqrt(2.0)


def _finite(a: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{what} has non-finite entries")
    return a


class Vec3K:
    """Plane symmetric second-rank tensor as a Kelvin 3-vector."""

    __slots__ = ("_v", "units")

    def __init__(self, c1: float, c2: float, c6: float, units: str = ""):
        v = _finite(np.array([c1, c2, c6], dtype=float), "Vec3K")
        v.setflags(write=False)
        self._v = v
        self.units = units

    @classmethod
    def of(cls, values, units: str = "") -> "Vec3K":
        a = np.asarray(values, dtype=float).reshape(3)
        return cls(a[0], a[1], a[2], units)

    @property
    def v(self) -> np.ndarray:
        return self._v

    c1 = property(lambda self: float(self._v[0]))
    c2 = property(lambda self: float(self._v[1]))
    c6 = property(lambda self: float(self._v[2]))

    def __array__(self, dtype=None, copy=None):
        return self._v.astype(dtype) if dtype is not None else self._v.copy()

    def __iter__(self):
        return iter(self._v.tolist())

    def __eq__(self, other) -> bool:
        return isinstance(other, Vec3K) and bool(np.array_equal(self._v, other._v))

    def __repr__(self) -> str:
        return f"Vec3K({self.c1!r}, {self.c2!r}, {self.c6!r})"


class Tensor4Gen:
    """3x3 Kelvin matrix with no symmetry assumed (e.g. the compliance coupling)."""

    __slots__ = ("_m", "units")

    def __init__(self, m, units: str = ""):
        a = _finite(np.array(m, dtype=float).reshape(3, 3), type(self).__name__)
        a = self._normalize(a)
        a.setflags(write=False)
        self._m = a
        self.units = units

    @staticmethod
    def _normalize(a: np.ndarray) -> np.ndarray:
        return a

    @property
    def m(self) -> np.ndarray:
        return self._m

    @property
    def T(self) -> "Tensor4Gen":
        return Tensor4Gen(self._m.T, self.units)

    def __array__(self, dtype=None, copy=None):
        return self._m.astype(dtype) if dtype is not None else self._m.copy()

    def __getitem__(self, idx):
        return self._m[idx]

    def __repr__(self) -> str:
        rows = ", ".join(str(r.tolist()) for r in self._m)
        return f"{type(self).__name__}([{rows}], units={self.units!r})"

    def __eq__(self, other) -> bool:
        return type(other) is type(self) and bool(np.array_equal(self._m, other._m))

    def frobenius(self) -> float:
        return float(np.linalg.norm(self._m))


class Tensor4Sym(Tensor4Gen):
    """Symmetric 3x3 Kelvin matrix. Input is symmetrised on construction.

    Construction rejects matrices whose asymmetry exceeds 1e-9 of their norm,
    which would indicate a caller bug rather than rounding noise.
    """

    __slots__ = ()

    @staticmethod
    def _normalize(a: np.ndarray) -> np.ndarray:
        scale = np.linalg.norm(a)
        if np.linalg.norm(a - a.T) > 1e-9 * max(scale, 1e-300):
            raise ValueError("Tensor4Sym requires a symmetric matrix")
        return 0.5 * (a + a.T)

    @property
    def T(self) -> "Tensor4Sym":
        return self

    def lift(self) -> Tensor4Gen:
        return Tensor4Gen(self._m, self.units)


def rotation_operator(theta: float) -> np.ndarray:
    """Kelvin operator K(theta) with ``t' = K t`` for vectors, ``K m K^T`` for matrices."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array(
        [
            [c * c, s * s, SQRT2 * c * s],
            [s * s, c * c, -SQRT2 * c * s],
            [-SQRT2 * c * s, SQRT2 * c * s, c * c - s * s],
        ]
    )


def rotate(t, theta: float):
    """Components of ``t`` in the frame rotated by ``theta`` (radians).

    Works for Tensor4Sym, Tensor4Gen, Vec3K and bare arrays of shape (3,) or (3, 3).
    """
    if not math.isfinite(theta):
        raise ValueError("rotation angle must be finite")
    k = rotation_operator(theta)
    if isinstance(t, Vec3K):
        return Vec3K.of(k @ t.v, t.units)
    if isinstance(t, Tensor4Gen):
        return type(t)(k @ t.m @ k.T, t.units)
    a = np.asarray(t, dtype=float)
    return k @ a if a.ndim == 1 else k @ a @ k.T


def det(t) -> float:
    m = np.asarray(t, dtype=float)
    return float(
        m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
        - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
        + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
    )


def singular_threshold(t) -> float:
    return SINGULAR_REL_THRESHOLD * float(np.linalg.norm(np.asarray(t, dtype=float))) ** 3


def is_singular(t) -> bool:
    return abs(det(t)) < singular_threshold(t)


def adjugate(m: np.ndarray) -> np.ndarray:
    a = np.asarray(m, dtype=float)
    cof = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            r = [x for x in range(3) if x != i]
            c = [x for x in range(3) if x != j]
            minor = a[r[0], c[0]] * a[r[1], c[1]] - a[r[0], c[1]] * a[r[1], c[0]]
            cof[i, j] = (-1) ** (i + j) * minor
    return cof.T


def invert(t, what: str = "matrix"):
    """Closed-form adjugate inverse. Raises SingularMatrix below the threshold."""
    m = np.asarray(t, dtype=float)
    d = det(m)
    thr = singular_threshold(m)
    if not abs(d) >= thr or d == 0.0:
        raise SingularMatrix(d, thr, what)
    inv = adjugate(m) / d
    if isinstance(t, Tensor4Sym):
        return Tensor4Sym(0.5 * (inv + inv.T), t.units)
    if isinstance(t, Tensor4Gen):
        return Tensor4Gen(inv, t.units)
    return inv


def sym_part(t) -> Tensor4Sym:
    m = np.asarray(t, dtype=float)
    return Tensor4Sym(0.5 * (m + m.T), getattr(t, "units", ""))


def skew_norm(t) -> float:
    m = np.asarray(t, dtype=float)
    return float(np.linalg.norm(0.5 * (m - m.T)))


def skew_residual(t) -> float:
    """||m - m^T|| / ||m||, zero for the zero matrix."""
    m = np.asarray(t, dtype=float)
    n = np.linalg.norm(m)
    return 0.0 if n == 0.0 else float(np.linalg.norm(m - m.T) / n)
