"""
dafermos-dg: entropy-corrected discontinuous Galerkin schemes for 1-D scalar conservation laws.

The nodal DG scheme is stabilized per cell by a mean-free steepest entropy
descent whose size follows an error estimate against the subcell
finite-volume limit: semidiscretely (DDG) or after each SSPRK33 step
(DRKDG). A Godunov finite-volume solver provides reference solutions, and
experiment pipelines reproduce convergence, entropy and blow-up studies.
"""

from .chain import Chain
from .config import Experiment, InitialData, RunConfig, parse_config
from .context import Context, ImmutableContext
from .correction import CorrectionReport, DDGStepReport, DescentDirection, cell_entropy_violation, ddg_rhs, descent_direction, epsilon_semidiscrete
from .dg import DGState, Mesh1D, cell_mean, cell_means, dg_rhs, interface_entropy_fluxes, interface_fluxes, interpolate_ic, total_mass
from .diagnostics import (
    ConvergenceTable,
    EntropyTrace,
    blowup_scan,
    burgers_smooth_exact,
    dafermos_comparison,
    entropy_trace,
    eoc,
    error_norms,
    mean_entropy_bound,
    total_entropy_dg,
)
from .discrete import DescentOutcome, DescentParams, DiscreteReport, curvature_bound, discrete_delta, drkdg_step, entropy_descent_discrete
from .errors import (
    BlowUpError,
    DafermosError,
    InvalidArgumentError,
    InvalidMeshError,
    InvalidOrderError,
    NoClassicalSolutionError,
    NonFiniteStateError,
    UsageError,
)
from .experiments import build_chain, execute
from .fv import FVSolution, FVState, fv_rhs, fv_solve
from .initial_conditions import InitialCondition, by_name, on_domain, rarefaction, rarefaction_exact, sine_shock, smooth
from .laws import (
    GODUNOV,
    LOCAL_LAX_FRIEDRICHS,
    FluxKind,
    NumericalFlux,
    ScalarLaw,
    burgers,
    godunov_entropy_flux,
    godunov_flux,
    linear_advection,
    llf_entropy_flux,
    llf_flux,
    max_wave_speed,
    numerical_flux,
)
from .quadrature import Basis, CellOperators, QuadRule, build_basis, gauss_legendre, gauss_lobatto, scale_to_cell
from .reference import ErrorEstimate, RefDerivative, delta, delta_U, l1_ref, reference_derivative, regular_part, singular_projection
from .solver import Scheme, Solution, dg_time_step, fv_time_step, integrate, prepare_state
from .timestepping import StageRecord, ssprk33_step

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "Chain",
    "Context",
    "ImmutableContext",
    "Experiment",
    "InitialData",
    "RunConfig",
    "parse_config",
    "QuadRule",
    "Basis",
    "CellOperators",
    "gauss_lobatto",
    "gauss_legendre",
    "build_basis",
    "scale_to_cell",
    "ScalarLaw",
    "FluxKind",
    "NumericalFlux",
    "LOCAL_LAX_FRIEDRICHS",
    "GODUNOV",
    "burgers",
    "linear_advection",
    "llf_flux",
    "llf_entropy_flux",
    "godunov_flux",
    "godunov_entropy_flux",
    "numerical_flux",
    "max_wave_speed",
    "Mesh1D",
    "DGState",
    "interpolate_ic",
    "interface_fluxes",
    "interface_entropy_fluxes",
    "dg_rhs",
    "cell_mean",
    "cell_means",
    "total_mass",
    "RefDerivative",
    "ErrorEstimate",
    "regular_part",
    "singular_projection",
    "reference_derivative",
    "delta",
    "delta_U",
    "l1_ref",
    "DescentDirection",
    "CorrectionReport",
    "DDGStepReport",
    "descent_direction",
    "epsilon_semidiscrete",
    "ddg_rhs",
    "cell_entropy_violation",
    "StageRecord",
    "ssprk33_step",
    "DescentParams",
    "DescentOutcome",
    "DiscreteReport",
    "discrete_delta",
    "curvature_bound",
    "entropy_descent_discrete",
    "drkdg_step",
    "FVState",
    "FVSolution",
    "fv_rhs",
    "fv_solve",
    "InitialCondition",
    "sine_shock",
    "rarefaction",
    "smooth",
    "by_name",
    "on_domain",
    "rarefaction_exact",
    "EntropyTrace",
    "ConvergenceTable",
    "total_entropy_dg",
    "mean_entropy_bound",
    "error_norms",
    "eoc",
    "burgers_smooth_exact",
    "blowup_scan",
    "dafermos_comparison",
    "entropy_trace",
    "Scheme",
    "Solution",
    "dg_time_step",
    "fv_time_step",
    "integrate",
    "prepare_state",
    "build_chain",
    "execute",
    "DafermosError",
    "InvalidOrderError",
    "InvalidMeshError",
    "InvalidArgumentError",
    "NonFiniteStateError",
    "BlowUpError",
    "NoClassicalSolutionError",
    "UsageError",
]
