"""Polar analysis of coupled composite laminates."""

__version__ = "0.1.0"

from .errors import (
    CaseNotApplicable,
    InvalidMaterial,
    InvalidStack,
    LamipolarError,
    NotIdenticalPly,
    ParseError,
    SingularMatrix,
    UnitsMismatch,
    UnknownQuantity,
)
from .kelvin import Tensor4Gen, Tensor4Sym, Vec3K, rotate
from .laminate import LaminateTensors, Ply, Stack, homogenize, lamination_parameters, load_stack
from .material import Material, TechnicalConstants, builtin, load_materials
from .polar import PolarElastic, PolarGeneral, classify, from_cartesian_gen, from_cartesian_sym
from .response import LoadCase, ResponseResult, respond, surface_mesh
from .search import Objective, SearchConfig, search, verify_known_sequences
