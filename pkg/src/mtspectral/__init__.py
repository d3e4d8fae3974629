"""Spectral expansions on the real line in Malmquist-Takenaka and related
orthonormal rational, Laguerre-type and Hermite bases."""

from .analysis import (
    DecayFit,
    DecayModel,
    RhoRegion,
    fit_decay,
    mt_coefficients,
    partial_sum_error,
    reference_coeffs_runge,
    rho_region,
)
from .bases import evaluate, recurrence
from .basis_core import BasisSpec, Family, GeneralMTParams, PhaseConvention, eval_general_mt, eval_mt
from .exceptions import (
    BasisMismatch,
    DomainError,
    InsufficientData,
    MTSpectralError,
    ParameterError,
    ReducibilityError,
    WindowError,
)
from .laguerre import eval_fl, eval_fl_sum, eval_twisted_hermite
from .operators import TridiagOp, apply, cayley_weight_op, diff_op, mt_product, propagate, x_ddx_op
from .transform import (
    Expansion,
    MappedGrid,
    analyze,
    gram_matrix,
    hermite_analyze,
    inner_product_quadrature,
    make_grid,
    synthesize,
    synthesize_on_grid,
)

__version__ = "0.1.0"
