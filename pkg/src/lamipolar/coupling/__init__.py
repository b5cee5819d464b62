"""Coupling analysis: symmetry of calB, special cases, structure and closed forms."""

from .closed_forms import (
    CLOSED_FORM_CASES,
    Comparison,
    Prediction,
    applicable_closed_forms,
    compare_special_forms,
    compliance_special_forms,
    isotropy_preservation,
)
from .conditions import BSymReport, ShiftAngles, bsym_conditions, c_conditions, h_in_coupling_frame, h_tensor, shift_angles
from .special_cases import (
    SPECIAL_CASES,
    CaseResidual,
    RariReport,
    applicable_cases,
    isotropic_coupling_compliance,
    match_special_case,
    rari_constancy,
    special_case_bsym,
)
from .structure import (
    BShape,
    ShapeReport,
    SingularityCause,
    SingularityVerdict,
    coupling_from_lamination,
    decompose_calB,
    polar_determinant,
    reconstruct_coupling,
    shape_classify,
    shape_of,
    singularity,
)
