"""Tolerance defaults. ``LAMIPOLAR_TOL`` overrides the relative tolerance."""

import os

DEFAULT_REL_TOL = 1e-8
# |det| below this fraction of ||m||_F^3 counts as singular
SINGULAR_REL_THRESHOLD = 1e-9


def default_tol() -> float:
    raw = os.environ.get("LAMIPOLAR_TOL")
    if raw is None:
        return DEFAULT_REL_TOL
    try:
        tol = float(raw)
    except ValueError:
        return DEFAULT_REL_TOL
    return tol if tol > 0 else DEFAULT_REL_TOL
