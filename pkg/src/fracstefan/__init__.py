"""Monotone explicit finite-difference solver for fractional Stefan problems.

The enthalpy h evolves by dh/dt + (-Lap)^s phi(h) = 0 on a uniform 1-D grid
with constant far-field extension.  Submodules:

    phase       enthalpy-to-temperature laws phi
    grid        grid, far field, state container, initial sampling
    stencil     discrete fractional Laplacian (weights, apply, point oracle)
    stepper     explicit monotone time stepping under the CFL rule
    selfsimilar rescaled profiles, free-boundary location, exponent fits
    experiments scripted studies (sweeps, propagation, limiting regimes)
    config      INI run configuration
    cli         command-line front end
"""

__version__ = "0.1.0"

from .phase import PhaseLaw
from .grid import EnthalpyState, FarField, Grid1D, init_cell_average, init_pointwise
from .stencil import (
    OracleError,
    Stencil,
    apply,
    boundary_flux,
    build_power_weights,
    build_quadrature_weights,
    consistency_error,
    kernel_constant,
    oracle_point,
    power_kernel,
    power_tail,
)
from .stepper import (
    CFLError,
    NumericsError,
    RunConfig,
    cfl_max_dt,
    ode_limit,
    run,
    run_classical,
    step,
)
from .selfsimilar import (
    FitWindowError,
    NoWaterError,
    ProfileError,
    SelfSimilarProfile,
    WindowTooSmallError,
    extract_profile,
    fit_front_exponent,
    fit_tail_exponent,
    locate_free_boundary,
    mass_transfer,
    profile_report,
    step_datum,
)
from .config import Config, ConfigError, parse_config, render_config, validate_config
