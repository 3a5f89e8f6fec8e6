"""Matrix orthogonal polynomials on the real line and their Riemann-Hilbert identities."""

from .errors import (
    DimensionMismatchError,
    IllConditionedError,
    InsufficientMomentsError,
    MoprlError,
    NonConvergentError,
)
from .ladder import (
    LadderCoeffs,
    e_matrix,
    f_matrix,
    f_matrix_via_expansion,
    integral_coeffs,
    integral_f_matrix,
    ladder_coeffs,
    ode_coeffs,
)
from .matpoly import MatrixPolynomial, adjoint, solve_block_system
from .moments import MomentTable, block_hankel, compute_moments
from .mop import (
    MopSequence,
    assemble_Y,
    assemble_Y_inverse,
    build_sequence,
    cauchy_transform,
    cd_kernel,
    orthonormal,
    orthonormal_second,
)
from .verify import CHECKS, VerificationReport, run_checks
from .weights import (
    AdConditionCase,
    WeightSpec,
    ad_condition_case,
    custom,
    example_spec,
    freud_a,
    freud_b,
    hermite_a,
    hermite_b,
    poly_u,
    scalar_hermite,
    weight_from_json,
    weight_to_json,
)

__version__ = "0.1.0"
