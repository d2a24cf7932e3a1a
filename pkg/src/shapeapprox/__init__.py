"""Shape-preserving polynomial approximation on [0,1]: Bernstein and
Durrmeyer-type operators, k-monotonicity-preserving composite operators,
weighted moduli of smoothness, and constrained best approximation."""

from .best_approx import (
    ApproxResult,
    best_qmonotone,
    best_uniform,
    equioscillation_count,
    jackson_ratio,
)
from .errors import (
    BackendError,
    BasisError,
    DegreeCapError,
    DomainError,
    PrecisionError,
    RegimeError,
    ShapeApproxError,
    SolverError,
)
from .functions import (
    ExpFunction,
    FunctionHandle,
    LogShiftFunction,
    PiecewiseLinearFunction,
    PolyFunction,
    PowerFunction,
    TruncatedPowerFunction,
    catalog,
    linear,
    monomial,
    q_monotone_catalog,
)
from .generator import GeneratorPoly, build_generator, deficiency_slope, moment
from .moduli import (
    ModulusEstimate,
    bound_envelope,
    endpoint_refined_x_grid,
    fit_modulus_exponent,
    omega,
    omega_dt,
    step_weight,
    sym_diff,
)
from .operators import (
    MnResult,
    MomentProfile,
    apply_Mn,
    apply_bernstein,
    apply_durrmeyer_lupas,
    apply_gavrea,
    apply_genuine_durrmeyer,
    bernstein_image,
    derivative_bridge_residual,
    durrmeyer_image,
    durrmeyer_lupas_image,
    gavrea_image,
    genuine_durrmeyer_image,
    genuine_durrmeyer_moment,
    genuine_durrmeyer_moment_recurrence,
    lupas_derivative_identity_check,
    lupas_endpoint_moment,
    lupas_moment_closed_form,
    mn_image,
    moment_profile,
)
from .polynomial import BERNSTEIN, DEGREE_CAP, MONOMIAL, Polynomial
from .shape import ShapeReport, check_k_monotone_fn, check_k_monotone_poly
from .simplex import SimplexResult, solve_lp
from .special import (
    TauPoly,
    chebyshev_T,
    lupas_product_identity_check,
    phi_bernstein_expansion,
    phi_leading_coefficient,
    pochhammer,
    tau,
    ultraspherical_phi,
)

__version__ = "0.1.0"
