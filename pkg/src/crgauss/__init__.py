"""Gauss-equation analysis of CR embeddings M^5 -> S^7 for n = 2 curvature."""

__version__ = "0.1.0"

from .embed import QuadraticForm, defining_residual, sample_hypersurface, sphere_residual, webster_map
from .fischer import HermitianA, fischer_decompose, is_harmonic, lift_A
from .gauss import (
    GaussSolution,
    GridSpec,
    SffVector,
    A_from_sff,
    brute_solutions,
    build_TA,
    rank1_nsd_factor,
    solve_gauss,
    verify_gauss,
)
from .normalize import SU2Element, c_root_candidates, normalize, su2_apply
from .tensor import (
    Classification,
    CurvatureTensor,
    NormalForm,
    build_LS_general,
    build_LS_normalized,
    classify,
    laplacian,
    sectional_eval,
    sectional_matrix,
    tensor_from_normal_form,
    validate,
)
