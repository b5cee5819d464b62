import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_fabric, random_hybrid_stack, random_identical_stack, random_material
from lamipolar.coupling import (
    BShape,
    SingularityCause,
    bsym_conditions,
    c_conditions,
    decompose_calB,
    h_in_coupling_frame,
    h_tensor,
    isotropic_coupling_compliance,
    polar_determinant,
    rari_constancy,
    reconstruct_coupling,
    shape_classify,
    shape_of,
    singularity,
    special_case_bsym,
)
from lamipolar.errors import CaseNotApplicable, NotIdenticalPly
from lamipolar.kelvin import det, is_singular
from lamipolar.laminate import Ply, Stack, homogenize
from lamipolar.material import Material, TechnicalConstants
from lamipolar.polar import PolarElastic, from_cartesian_gen
from lamipolar.search import KNOWN_QHCL, sequence_angles

seeds = st.integers(0, 2**32 - 1)


def coupled_identical(seed):
    rng = np.random.default_rng(seed)
    while True:
        lt = homogenize(random_identical_stack(rng, 2, 10))
        if not is_singular(lt.B):
            return lt


@given(seeds)
def test_h_is_skew(seed):
    lt = coupled_identical(seed)
    rep = bsym_conditions(lt)
    assert rep.H_sym_residual < 1e-10


@given(seeds)
def test_closed_form_c_matches_h(seed):
    lt = coupled_identical(seed)
    c = c_conditions(lt.polar_A, lt.polar_B, lt.polar_D, lt.ply.T0, lt.ply.T1)
    h = h_in_coupling_frame(lt)
    a, b, d = (np.asarray(x) for x in (lt.A, lt.B, lt.D))
    scale = np.linalg.norm(d @ np.linalg.solve(b, a))
    assert np.max(np.abs(c - h)) < 1e-9 * scale


def test_h_of_qhcl_vanishes(t300):
    lt = homogenize(Stack.from_angles(t300, sequence_angles(KNOWN_QHCL[0])))
    h = h_tensor(lt.A, lt.B, lt.D)
    assert np.linalg.norm(h) < 1e-10 * np.linalg.norm(np.asarray(lt.A)) ** 2 / np.linalg.norm(np.asarray(lt.B))


def test_qhcl_sequences_have_symmetric_calB(t300):
    for seq in KNOWN_QHCL:
        lt = homogenize(Stack.from_angles(t300, sequence_angles(seq)))
        rep = bsym_conditions(lt, 1e-10)
        assert rep.symmetric and rep.matched_special_case == "quasi_homogeneous_coupled"
        assert special_case_bsym(lt, "quasi_homogeneous_coupled").satisfied(1e-10)


def test_generic_coupled_stack_is_not_symmetric(t300):
    rep = bsym_conditions(homogenize(Stack.from_angles(t300, [0, 60, 60, 0, -60, -60])))
    assert not rep.symmetric
    assert rep.C_agrees is True


def test_singular_b_is_reported_not_raised(t300):
    rep = bsym_conditions(homogenize(Stack.from_angles(t300, [0, 90])))
    assert rep.H_entries is None and any("singular" in n for n in rep.notes)


def test_case_precondition_enforced(t300):
    lt = homogenize(Stack.from_angles(t300, [0, 30, -70]))
    with pytest.raises(CaseNotApplicable):
        special_case_bsym(lt, "hybrid_isotropic")
    with pytest.raises(CaseNotApplicable):
        special_case_bsym(lt, "no_such_case")


def _iso(name, e, nu, t):
    return Material(name, TechnicalConstants(e, e, e / (2 * (1 + nu)), nu), t, "GPa,mm")


def test_hybrid_isotropic_stack(rng):
    for _ in range(10):
        mats = [_iso(f"i{k}", rng.uniform(5, 200), rng.uniform(0.1, 0.4), rng.uniform(0.1, 0.5)) for k in range(3)]
        s = Stack(tuple(Ply(mats[int(rng.integers(3))], 0.0) for _ in range(int(rng.integers(2, 8)))))
        lt = homogenize(s)
        if lt.B_zero:
            continue
        assert special_case_bsym(lt, "hybrid_isotropic").satisfied(1e-10)
        g = lt.polar_calB
        t0, t1 = isotropic_coupling_compliance(lt.polar_A, lt.polar_B, lt.polar_D)
        assert g.t0 == pytest.approx(t0, rel=1e-9) and g.t1 == pytest.approx(t1, rel=1e-9)
        assert np.linalg.norm(np.asarray(lt.calB) - np.asarray(lt.calB).T) < 1e-12 * np.linalg.norm(np.asarray(lt.calB))


@given(seeds)
def test_decomposition_sums_and_complement_pattern(seed):
    lt = homogenize(random_hybrid_stack(np.random.default_rng(seed)))
    elastic, comp = decompose_calB(lt.calB)
    cb = np.asarray(lt.calB)
    scale = max(np.linalg.norm(cb), 1e-300)
    np.testing.assert_allclose(np.asarray(elastic) + np.asarray(comp), cb, atol=1e-14 * scale)
    c = np.asarray(comp)
    assert abs(c[2, 2]) < 1e-12 * scale and abs(c[2, 0] + c[2, 1]) < 1e-12 * scale
    g = from_cartesian_gen(comp)
    assert max(abs(g.t0), abs(g.t1), g.r0, g.r1) < 1e-12 * scale


@given(seeds)
def test_polar_determinant_matches_matrix(seed):
    lt = homogenize(random_hybrid_stack(np.random.default_rng(seed)))
    b = np.asarray(lt.B)
    ref = np.linalg.norm(b) ** 3
    assert abs(polar_determinant(lt.polar_B) - det(b)) <= 1e-9 * max(ref, 1e-300)


def test_singularity_causes(t300, fabric):
    cross = singularity(homogenize(Stack.from_angles(t300, [0, 90])))
    assert cross.singular and cross.cause is SingularityCause.R0B_ZERO
    sym = singularity(homogenize(Stack.from_angles(t300, [0, 90, 0])))
    assert sym.cause is SingularityCause.B_ZERO
    fab = singularity(homogenize(Stack.from_angles(fabric, [-22.5, 22.5])))
    assert fab.cause is SingularityCause.R1B_ZERO
    ok = singularity(homogenize(Stack.from_angles(t300, [0, 60, 60, 0, -60, -60])))
    assert not ok.singular and ok.cause is SingularityCause.NONE


def test_shape_patterns(t300, fabric):
    assert shape_classify(homogenize(Stack.from_angles(t300, [0, 90]))).B is BShape.CROSS_PLY_DIAGONAL
    rep = shape_classify(homogenize(Stack.from_angles(fabric, [-30, 30])))
    assert rep.B is BShape.ANGLE_PLY_SHEAR
    assert shape_classify(homogenize(Stack.from_angles(t300, [45, -45, -45, 45]))).B is BShape.ZERO
    assert shape_of(np.zeros((3, 3))) is BShape.ZERO
    assert shape_of(np.arange(9.0).reshape(3, 3)) is BShape.FULL


@given(seeds)
def test_lamination_rebuild_of_B(seed):
    rng = np.random.default_rng(seed)
    mat = random_material(rng) if seed % 2 else random_fabric(rng)
    lt = homogenize(random_identical_stack(rng, 2, 10, mat))
    rebuilt, actual = reconstruct_coupling(lt)
    scale = np.linalg.norm(np.asarray(lt.A))
    assert np.linalg.norm(rebuilt - actual) < 1e-10 * scale


def test_rebuild_needs_identical_plies(rng):
    lt = homogenize(Stack((Ply(random_material(rng, "a"), 0.0), Ply(random_material(rng, "b"), 1.0))))
    with pytest.raises(NotIdenticalPly):
        reconstruct_coupling(lt)


@settings(max_examples=30)
@given(seeds)
def test_rari_constancy_is_not_generic(seed):
    lt = coupled_identical(seed)
    assert not rari_constancy(lt, 1e-8).rari_constant(1e-8)


def test_identical_ply_B_is_rari_constant(rng):
    for _ in range(20):
        lt = homogenize(random_identical_stack(rng))
        p = lt.polar_B
        scale = lt.ply.T0
        b = np.asarray(lt.B)
        assert abs(p.T0) < 1e-12 * scale and abs(p.T1) < 1e-12 * scale
        assert abs(b[0, 1] - b[2, 2] / 2) <= 1e-12 * np.linalg.norm(b)


def test_two_sixty_stack_B_is_not_orthotropic(t300):
    # the polar angles of B differ by an odd multiple of pi/8, not by k pi/4
    from lamipolar.polar import Symmetry, classify

    p = homogenize(Stack.from_angles(t300, [0, 60, 60, -60, -60, 0])).polar_B
    ratio = (p.Phi0 - p.Phi1) / (math.pi / 8)
    assert abs(ratio - round(ratio)) < 1e-12 and round(ratio) % 2 == 1
    assert classify(p).kind is Symmetry.GENERAL
