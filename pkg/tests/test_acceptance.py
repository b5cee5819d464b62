"""Acceptance criteria 1 to 11, one test each, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
"""

import functools
import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import (  # noqa: E402
    closed_form_instances,
    closed_form_laminate,
    oracle_compliance,
    random_fabric,
    random_hybrid_stack,
    random_identical_stack,
    random_material,
    record_criterion,
    rel,
)
from lamipolar.coupling import (  # noqa: E402
    BShape,
    bsym_conditions,
    compare_special_forms,
    isotropic_coupling_compliance,
    polar_determinant,
    shape_classify,
)
from lamipolar.errors import SingularMatrix  # noqa: E402
from lamipolar.kelvin import det, is_singular, skew_residual  # noqa: E402
from lamipolar.laminate import Ply, Stack, homogenize  # noqa: E402
from lamipolar.material import Material, TechnicalConstants, builtin, reduced_stiffness  # noqa: E402
from lamipolar.polar import from_cartesian_sym, wrap  # noqa: E402
from lamipolar.response import LoadCase, respond, surface_mesh  # noqa: E402
from lamipolar.search import (  # noqa: E402
    KNOWN_QHCL,
    Objective,
    SearchConfig,
    search,
    sequence_angles,
    verify_known_sequences,
)

SEED = 20240611


def criterion(number):
    """Wrap a check returning (ok, detail): print the verdict line, then assert."""
    def wrap_check(fn):
        @functools.wraps(fn)
        def run():
            try:
                ok, detail = fn()
            except Exception as exc:
                record_criterion(number, False, f"raised {type(exc).__name__}: {exc}")
                raise
            line = record_criterion(number, ok, detail)
            assert ok, line
        return run
    return wrap_check


@criterion(1)
def test_criterion_1_material_consistency():
    p = from_cartesian_sym(reduced_stiffness(builtin("T300-5208")))
    want = {"T0": 26.88, "T1": 24.74, "R0": 19.71, "R1": 21.43}
    errs = {k: abs(getattr(p, k) / v - 1) for k, v in want.items()}
    return all(e < 5e-3 for e in errs.values()), ", ".join(
        f"{k}={getattr(p, k):.4g} ({100 * e:.3f}%)" for k, e in errs.items())


@criterion(2)
def test_criterion_2_block_inverse_oracle():
    rng = np.random.default_rng(SEED)
    worst, count = 0.0, 0
    while count < 1200:
        s = random_hybrid_stack(rng) if count % 2 else random_identical_stack(rng)
        try:
            lt = homogenize(s)
        except SingularMatrix:
            continue
        want = oracle_compliance(s)
        for got, ref in zip((lt.calA, lt.calB, lt.calD), want):
            worst = max(worst, rel(np.asarray(got), ref))
        count += 1
    return worst < 1e-10, f"{count} stacks, worst relative Frobenius error {worst:.2e}"


@criterion(3)
def test_criterion_3_identical_ply_B_structure():
    rng = np.random.default_rng(SEED + 3)
    worst_t, worst_rari = 0.0, 0.0
    for _ in range(1000):
        lt = homogenize(random_identical_stack(rng))
        b = np.asarray(lt.B)
        norm_b = np.linalg.norm(b)
        pB = lt.polar_B
        worst_t = max(worst_t, max(abs(pB.T0), abs(pB.T1)) / lt.ply.T0)
        if norm_b > 0:
            worst_rari = max(worst_rari, abs(b[0, 1] - b[2, 2] / 2) / norm_b)
    ok = worst_t < 1e-12 and worst_rari < 1e-12
    return ok, f"1000 stacks, max |T0B|,|T1B|/T0 = {worst_t:.1e}, max |B12-B66/2|/||B|| = {worst_rari:.1e}"


def _symmetric_instances(rng, count):
    """Coupled stacks with symmetric calB: the known sequences under random
    materials, rotations and relabelings of the three orientations."""
    labels = [(0, 60, -60), (60, 0, -60), (-60, 60, 0), (0, -60, 60), (60, -60, 0), (-60, 0, 60)]
    out = []
    while len(out) < count:
        seq = KNOWN_QHCL[int(rng.integers(len(KNOWN_QHCL)))]
        lab = labels[int(rng.integers(len(labels)))]
        rot = float(rng.uniform(-90, 90))
        angles = [a + rot for a in sequence_angles(seq, dict(zip("abg", lab)))]
        lt = homogenize(Stack.from_angles(random_material(rng), angles))
        if not is_singular(lt.B):
            out.append(lt)
    return out


@criterion(4)
def test_criterion_4_h_skew_and_c_equivalence():
    rng = np.random.default_rng(SEED + 4)
    cases = []
    while len(cases) < 1000:
        lt = homogenize(random_identical_stack(rng))
        if not lt.B_zero and not is_singular(lt.B):
            cases.append(lt)
    cases += _symmetric_instances(rng, 100)
    zero, nonzero = 1e-10, 1e-6  # anything between the two counts as a counterexample
    worst_h, counter, n_sym, unevaluable = 0.0, 0, 0, 0
    for lt in cases:
        rep = bsym_conditions(lt, zero)
        worst_h = max(worst_h, rep.H_sym_residual)
        if rep.C_scaled is None:
            unevaluable += 1
            continue
        skew, c = rep.skew_residual, rep.C_scaled
        both_zero = skew < zero and c < zero
        both_nonzero = skew > nonzero and c > nonzero
        counter += not (both_zero or both_nonzero)
        n_sym += both_zero
    ok = worst_h < 1e-10 and counter == 0 and unevaluable == 0
    return ok, (f"{len(cases)} trials ({n_sym} symmetric), max sym(H) {worst_h:.1e}, "
                f"{counter} counterexamples, {unevaluable} without closed-form C")


@criterion(5)
def test_criterion_5_qhcl_suite():
    rep = verify_known_sequences("T300-5208", tol=1e-10)
    per_seq = {k: all(f[k] for f in rep.flags) for k in rep.flags[0]}
    detail = (", ".join(f"{k}={v}" for k, v in per_seq.items())
              + f"; A,D spread {rep.stiffness_spread:.1e}; calA,calD spread {rep.compliance_spread:.2e}"
              + f"; min B distance {rep.min_B_distance:.2e}")
    return rep.ok, detail


@criterion(6)
def test_criterion_6_fabric_example():
    lt = homogenize(Stack.from_angles(builtin("CE-fabric-gay"), [-22.5, 22.5]))
    h = 0.32
    rr = respond(lt, LoadCase.membrane(n6=-2.0, h=h, frame=lt.polar_calB.phi0))
    got = {"T0": lt.polar_A.T0, "R0B": lt.polar_B.R0, "r0B": lt.polar_calB.r0, "kappa6": rr.kappa.c6}
    want = {"T0": 1.49e4, "R0B": 5.45e3, "r0B": 3.07e-5, "kappa6": 2.4e-3}
    errs = {k: abs(got[k] / want[k] - 1) for k in want}
    # stretch companion: the formula-consistent curvature, not the published 1.2e-2
    k1 = respond(lt, LoadCase.membrane(2.0, -2.0, h=h, frame=lt.polar_calB.phi0)).kappa.c1
    ok = all(e < 1e-2 for e in errs.values()) and abs(k1 / 2.4e-3 - 1) < 1e-2
    return ok, ", ".join(f"{k}={got[k]:.4g}" for k in want) + f", stretch kappa1={k1:.4g} (not 1.2e-2)"


@criterion(7)
def test_criterion_7_binet_identity():
    rng = np.random.default_rng(SEED + 7)
    worst_binet = worst_polar = 0.0
    for i in range(1000):
        s = random_hybrid_stack(rng) if i % 2 else random_identical_stack(rng)
        lt = homogenize(s)
        b = np.asarray(lt.B)
        nb = np.linalg.norm(b)
        if nb == 0:
            continue
        lhs = det(lt.calB)
        rhs = -27 * det(lt.calA) * det(b) / det(lt.D)
        # relative to the size the right side would have for a well-conditioned B
        scale = 27 * abs(det(lt.calA)) * nb**3 / abs(det(lt.D))
        worst_binet = max(worst_binet, abs(lhs - rhs) / scale)
        worst_polar = max(worst_polar, abs(polar_determinant(lt.polar_B) - det(b)) / nb**3)
    ok = worst_binet < 1e-9 and worst_polar < 1e-9
    return ok, f"1000 stacks, det identity {worst_binet:.1e}, polar det {worst_polar:.1e}"


def _angle_ply(rng, mat):
    pairs = int(rng.integers(1, 6))
    delta = float(rng.uniform(1, 89))
    angles = [delta] * pairs + [-delta] * pairs
    rng.shuffle(angles)
    return Stack.from_angles(mat, angles)


def _cross_ply(rng, mat):
    angles = [0.0, 90.0] * int(rng.integers(1, 6))
    rng.shuffle(angles)
    return Stack.from_angles(mat, angles)


@criterion(8)
def test_criterion_8_shape_theorems():
    rng = np.random.default_rng(SEED + 8)
    tol = 1e-9
    angle_bad = {"orthotropic": 0, "fabric": 0}
    angle_total = {"orthotropic": 0, "fabric": 0}
    cross_bad = cross_total = 0
    for i in range(400):
        kind = "fabric" if i % 2 else "orthotropic"
        mat = random_fabric(rng) if kind == "fabric" else random_material(rng)
        lt = homogenize(_angle_ply(rng, mat))
        if lt.B_zero:
            continue
        angle_total[kind] += 1
        pB = lt.polar_B
        scale = np.linalg.norm(np.asarray(lt.B))
        good = (shape_classify(lt, tol).B is BShape.ANGLE_PLY_SHEAR and pB.R1 < tol * scale
                and abs(wrap(pB.Phi0 - math.pi / 8, math.pi / 4)) < 1e-9)
        angle_bad[kind] += not good
        lt = homogenize(_cross_ply(rng, mat))
        cross_total += 1
        shape = shape_classify(lt, tol).B
        cross_bad += not (lt.polar_B.R0 < tol * np.linalg.norm(np.asarray(lt.A))
                          and shape in (BShape.CROSS_PLY_DIAGONAL, BShape.ZERO))
    ok = sum(angle_bad.values()) == 0 and cross_bad == 0
    return ok, (f"angle-ply failures: orthotropic plies {angle_bad['orthotropic']}/{angle_total['orthotropic']}, "
                f"square-symmetric plies {angle_bad['fabric']}/{angle_total['fabric']}; "
                f"cross-ply failures {cross_bad}/{cross_total}")


def _isotropic(rng, name):
    e, nu = rng.uniform(5, 200), rng.uniform(0.05, 0.45)
    return Material(name, TechnicalConstants(e, e, e / (2 * (1 + nu)), nu), float(rng.uniform(0.1, 0.5)), "GPa,mm")


@criterion(9)
def test_criterion_9_special_case_oracles():
    rng = np.random.default_rng(SEED + 9)
    refs = tuple(rng.uniform(-math.pi, math.pi, 6))
    worst, checked = 0.0, 0
    for (case, A, B, D, ply) in closed_form_instances(refs):
        for c in compare_special_forms(closed_form_laminate(A, B, D, ply), case):
            worst = max(worst, c.error)
            checked += 1
    worst_hybrid, hybrids = 0.0, 0
    while hybrids < 200:
        mats = [_isotropic(rng, f"i{k}") for k in range(3)]
        s = Stack(tuple(Ply(mats[int(rng.integers(3))], 0.0) for _ in range(int(rng.integers(2, 9)))))
        lt = homogenize(s)
        if lt.B_zero:
            continue
        hybrids += 1
        cb = np.asarray(lt.calB)
        t0, t1 = isotropic_coupling_compliance(lt.polar_A, lt.polar_B, lt.polar_D)
        g = lt.polar_calB
        worst_hybrid = max(worst_hybrid, skew_residual(cb), (g.r0 + g.r1 + g.r2 + abs(g.t3)) / g.scale,
                           abs(g.t0 - t0) / g.scale, abs(g.t1 - t1) / g.scale)
    ok = worst < 1e-8 and worst_hybrid < 1e-8
    return ok, (f"{checked} closed-form parameters, worst {worst:.1e}; "
                f"{hybrids} isotropic hybrids, worst {worst_hybrid:.1e}")


@criterion(10)
def test_criterion_10_minimal_surface():
    lt = homogenize(Stack.from_angles(builtin("CE-fabric-gay"), [-22.5, 22.5]))
    frame = lt.polar_calB.phi0
    assert lt.qhcl and lt.polar_A.R0 + lt.polar_A.R1 < 1e-10 * lt.polar_A.T0
    results = []
    for n1, n2 in ((2.0, -2.0), (2.0, 0.0), (0.0, 3.0)):
        lc = LoadCase.membrane(n1, n2, Lx=200, Ly=200, frame=frame)
        rr = respond(lt, lc)
        lap = np.max(np.abs(surface_mesh(rr, lc, 41, 41).interior_laplacian()))
        results.append((rr.mean_H == 0.0 and rr.gaussian_K < 0 and lap < 1e-10, rr.mean_H, rr.gaussian_K, lap))
    glob = respond(lt, LoadCase.membrane(2.0, -2.0))
    glob_ok = abs(glob.mean_H) <= 1e-12 * np.max(np.abs(glob.kappa.v)) and glob.gaussian_K < 0
    ok = all(r[0] for r in results) and glob_ok
    worst_lap = max(r[3] for r in results)
    return ok, (f"3 stretch loads in the compliance frame: H = {[r[1] for r in results]}, "
                f"K < 0: {all(r[2] < 0 for r in results)}, max mesh Laplacian {worst_lap:.1e}; "
                f"global frame H/|kappa| = {abs(glob.mean_H) / np.max(np.abs(glob.kappa.v)):.1e}")


@criterion(11)
def test_criterion_11_search():
    start = time.perf_counter()
    obj = Objective.of("A_isotropy")
    runs = [search(SearchConfig((0.0, 60.0, -60.0), 6, seed=seed, budget=50_000, tol=1e-12), obj)
            for seed in range(20)]
    reached = all(r.converged and r.objective < 1e-12 and r.evaluations <= 50_000 for r in runs)
    again = search(SearchConfig((0.0, 60.0, -60.0), 6, seed=7, budget=50_000, tol=1e-12), obj)
    same = again.angles_deg == runs[7].angles_deg and np.array_equal(again.trace_current, runs[7].trace_current)
    # a run that anneals for its whole budget must also repeat exactly
    long_cfg = SearchConfig((0.0, 45.0, -45.0, 90.0), 10, seed=5, budget=5000, tol=0.0)
    x, y = search(long_cfg, Objective.of("D_isotropy")), search(long_cfg, Objective.of("D_isotropy"))
    same = same and x.evaluations == 5000 and np.array_equal(x.trace_current, y.trace_current)
    elapsed = time.perf_counter() - start
    ok = same and reached and elapsed < 60
    return ok, (f"reproducible={same}, 20 seeds reach < 1e-12: {reached}, "
                f"worst objective {max(r.objective for r in runs):.1e}, "
                f"most evaluations {max(r.evaluations for r in runs)}, {elapsed:.2f} s")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
