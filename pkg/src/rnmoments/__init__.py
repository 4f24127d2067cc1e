"""Function and image reconstruction from polynomial moments.

Two estimators over the same moment data: classic least squares (linear,
oscillates, overshoots) and the Radon-Nikodym quadratic-form ratio (bounded
by the observed range of f, positivity-preserving).  Matrix moments supply
trace averages, a natural eigenbasis, and value-space integration.
"""

from .approx import (
    METHODS,
    LebesgueHistogram,
    ReconstructionResult,
    Reconstructor,
    build_reconstructor,
    differentiate_reconstruction,
    eval_ls,
    eval_ls_grid,
    eval_psi_state,
    eval_psi_x0,
    eval_rn,
    eval_rn_grid,
    lebesgue_integral,
    lebesgue_measure,
    natural_basis,
    psi_state,
    reconstruct_derivative_1d,
    reconstruct_image,
    spur_average,
    spur_product_average,
)
from .basis import (
    CHEBYSHEV,
    CHEBYSHEV_SHIFTED,
    LEGENDRE,
    LEGENDRE_SHIFTED,
    BasisKind,
    CoeffVector,
    evaluate_all,
    evaluate_coeffvector,
    linearization_tensor,
    linearize_product,
)
from .kernels import BACKEND, available_backends
from .linalg import (
    EigenConvergenceError,
    GeneralizedEig,
    NotPositiveDefiniteError,
    SpdFactor,
    cholesky,
    generalized_sym_eig,
    spd_solve,
)
from .moments import (
    FunctionOracle,
    Measure1D,
    MomentSet,
    PixelMeasure2D,
    derivative_moments_1d,
    gauss_legendre_measure,
    gramm_from_vector,
    matrix_moments_from_vector,
    vector_moments_1d,
    vector_moments_2d,
)
from .pgm import GrayImage, PgmError, image_metrics, read_pgm, write_pgm

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "BACKEND",
    "METHODS",
    "available_backends",
    # basis
    "BasisKind",
    "CoeffVector",
    "CHEBYSHEV",
    "LEGENDRE",
    "CHEBYSHEV_SHIFTED",
    "LEGENDRE_SHIFTED",
    "evaluate_all",
    "evaluate_coeffvector",
    "linearize_product",
    "linearization_tensor",
    # moments
    "FunctionOracle",
    "Measure1D",
    "PixelMeasure2D",
    "MomentSet",
    "gauss_legendre_measure",
    "vector_moments_1d",
    "vector_moments_2d",
    "derivative_moments_1d",
    "matrix_moments_from_vector",
    "gramm_from_vector",
    # linalg
    "SpdFactor",
    "GeneralizedEig",
    "NotPositiveDefiniteError",
    "EigenConvergenceError",
    "cholesky",
    "spd_solve",
    "generalized_sym_eig",
    # approx
    "Reconstructor",
    "ReconstructionResult",
    "LebesgueHistogram",
    "build_reconstructor",
    "eval_ls",
    "eval_rn",
    "eval_ls_grid",
    "eval_rn_grid",
    "eval_psi_x0",
    "reconstruct_image",
    "spur_average",
    "spur_product_average",
    "natural_basis",
    "psi_state",
    "eval_psi_state",
    "lebesgue_measure",
    "lebesgue_integral",
    "reconstruct_derivative_1d",
    "differentiate_reconstruction",
    # pgm
    "GrayImage",
    "PgmError",
    "read_pgm",
    "write_pgm",
    "image_metrics",
]
