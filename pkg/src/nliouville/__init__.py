"""Radial solutions and mass quantization for the singular n-Liouville equation."""

from nliouville.closed_forms import (
    ClosedFormFamily,
    Family,
    eval_entire,
    eval_planar,
    eval_singular_radial,
    kelvin_transform,
    rescale,
    sample_profile,
)
from nliouville.dimension import (
    Dimension,
    SingularWeights,
    gamma_to_slope,
    slope_to_gamma,
)
from nliouville.errors import (
    DomainError,
    InsufficientSpanError,
    NLiouvilleError,
    SolverError,
)
from nliouville.integrator import BACKEND
from nliouville.pohozaev import (
    boundary_functional,
    check_annulus,
    mass_balance_residual,
)
from nliouville.profile import RadialProfile, read_profile_csv, write_profile_csv
from nliouville.quantization import (
    MassReport,
    alpha0_from_gamma,
    mass_equation_root,
    verify_quantization,
    weighted_total_mass,
)
from nliouville.radial_ode import (
    SolveConfig,
    asymptotic_slope,
    mass_of,
    measure,
    picard_local_solve,
    solve_for_gamma,
    solve_from_peak,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ClosedFormFamily",
    "Dimension",
    "DomainError",
    "Family",
    "InsufficientSpanError",
    "MassReport",
    "NLiouvilleError",
    "RadialProfile",
    "SingularWeights",
    "SolveConfig",
    "SolverError",
    "alpha0_from_gamma",
    "asymptotic_slope",
    "boundary_functional",
    "check_annulus",
    "eval_entire",
    "eval_planar",
    "eval_singular_radial",
    "gamma_to_slope",
    "kelvin_transform",
    "mass_balance_residual",
    "mass_equation_root",
    "mass_of",
    "measure",
    "picard_local_solve",
    "read_profile_csv",
    "rescale",
    "sample_profile",
    "slope_to_gamma",
    "solve_for_gamma",
    "solve_from_peak",
    "verify_quantization",
    "weighted_total_mass",
    "write_profile_csv",
]
