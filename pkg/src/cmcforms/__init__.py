"""Constant mean curvature hypersurfaces with two principal curvatures.

Construction, classification and numerical verification of rotation-type
constant mean curvature hypersurfaces in semi-Riemannian space forms of
every signature and curvature sign.
"""

from ._backend import backend_name, get_backend
from .errors import (
    CmcError,
    DegenerateComplement,
    DegenerateSample,
    DomainError,
    DomainExit,
    InvalidInput,
    NumericalFailure,
    SignatureUnavailable,
)
from .frame import FrameTrajectory, integrate_frame, rho0, rho0_coeffs, rho_t
from .immersion import (
    ConstructionCase,
    ImmersionSpec,
    VerificationReport,
    build_immersion,
    build_point,
    curvature_scalars,
    gauss_map,
    verify,
)
from .metric_core import (
    SignatureMetric,
    SignTriple,
    SpaceFormSpec,
    inner,
    orth_complement_basis,
    pick_frame,
    sample_quadric,
)
from .moduli import (
    AdmissibilityReport,
    SignCase,
    SweepResult,
    admissible,
    params_for,
    phi_bounds,
    sweep,
    thresholds,
)
from .profile import (
    IntegrationOptions,
    ProfileParams,
    ProfileSolution,
    SolutionTag,
    SolutionType,
    classify,
    critical_points,
    eval_f,
    eval_f_prime,
    find_positive_roots,
    integrate_profile,
    kappas,
    measure_period,
    period_quadrature,
    solution_catalog,
)

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityReport",
    "CmcError",
    "ConstructionCase",
    "DegenerateComplement",
    "DegenerateSample",
    "DomainError",
    "DomainExit",
    "FrameTrajectory",
    "ImmersionSpec",
    "IntegrationOptions",
    "InvalidInput",
    "NumericalFailure",
    "ProfileParams",
    "ProfileSolution",
    "SignCase",
    "SignTriple",
    "SignatureMetric",
    "SignatureUnavailable",
    "SolutionTag",
    "SolutionType",
    "SpaceFormSpec",
    "SweepResult",
    "VerificationReport",
    "admissible",
    "backend_name",
    "build_immersion",
    "build_point",
    "classify",
    "critical_points",
    "curvature_scalars",
    "eval_f",
    "eval_f_prime",
    "find_positive_roots",
    "gauss_map",
    "get_backend",
    "inner",
    "integrate_frame",
    "integrate_profile",
    "kappas",
    "measure_period",
    "orth_complement_basis",
    "params_for",
    "period_quadrature",
    "phi_bounds",
    "pick_frame",
    "rho0",
    "rho0_coeffs",
    "rho_t",
    "sample_quadric",
    "solution_catalog",
    "sweep",
    "thresholds",
    "verify",
    "__version__",
]
