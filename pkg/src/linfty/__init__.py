"""Exact computations with L-infinity structures on small Z2-graded spaces."""

from .cochains import Cochain, format_cochain, parse_cochain
from .coderivation import (
    LInfinityStructure,
    LinearAutomorphism,
    bracket,
    conjugate_linear,
    evaluate,
    exp_automorphism,
    is_codifferential,
    lift,
)
from .cohomology import CohomologyReport, coboundary, cohomology, deformation_directions, filtered_cohomology
from .extensions import build_d_infty_ext, build_d_lambda_e, equivext_check, standard_form
from .graded import SPACE_0_3, SPACE_1_2, GradedDim, GradedSpace, symmetric_basis
from .moduli import FamilyTag, canonical_form, classify, jump_neighbors, linearly_equivalent, variety_check

__version__ = "0.1.0"
