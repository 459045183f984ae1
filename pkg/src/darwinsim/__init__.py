"""Deterministic models of selection-driven trait dynamics.

Two complementary models live here:

* :mod:`darwinsim.verhulst` — a discrete logistic population whose
  individuals carry an integer trait, with mutation spreading offspring
  across neighbouring traits and trait-dependent mortality selecting
  among them; comes with certified population bounds and an extinction
  criterion.
* :mod:`darwinsim.markov` — a Markov chain over ordered trait states
  under constant upward drift, with two stationary-distribution solvers
  and closed forms for the tridiagonal case.

:mod:`darwinsim.experiments` packages the standard runs (long
simulations, drift sweeps, closed-form verification) behind a
serialisable result layer, and :mod:`darwinsim.cli` exposes everything
as subcommands emitting CSV.
"""

from .errors import (
    ConvergenceError,
    DimensionMismatchError,
    EmptyPopulationError,
    SingularMatrixError,
)
from .experiments import (
    ClosedFormReport,
    PopulationExperimentResult,
    SweepResult,
    run_delta_sweep,
    run_population_experiment,
    verify_closed_form,
)
from .markov import (
    AssumptionsReport,
    ChainSpec,
    RandomSource,
    StationaryDistribution,
    build_random_transition,
    expected_state,
    expected_state_closed,
    hessenberg_build,
    hessenberg_stationary_closed,
    is_row_stochastic,
    limit_expected_state,
    stationary_direct,
    stationary_power,
    validate_assumptions,
)
from .verhulst import (
    MortalityTable,
    MutationKernel,
    SimulationTrace,
    VerhulstParams,
    constant_mortality,
    convolve_mutation,
    default_params,
    expected_velocity,
    extinction_condition_holds,
    inverse_trait_mortality,
    mutation_retention,
    nearest_neighbor_kernel,
    point_mass_population,
    population_step,
    scalar_step,
    simulate,
    upper_bound,
    validate_kernel,
    validate_params,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DimensionMismatchError",
    "EmptyPopulationError",
    "SingularMatrixError",
    "ClosedFormReport",
    "PopulationExperimentResult",
    "SweepResult",
    "run_delta_sweep",
    "run_population_experiment",
    "verify_closed_form",
    "AssumptionsReport",
    "ChainSpec",
    "RandomSource",
    "StationaryDistribution",
    "build_random_transition",
    "expected_state",
    "expected_state_closed",
    "hessenberg_build",
    "hessenberg_stationary_closed",
    "is_row_stochastic",
    "limit_expected_state",
    "stationary_direct",
    "stationary_power",
    "validate_assumptions",
    "MortalityTable",
    "MutationKernel",
    "SimulationTrace",
    "VerhulstParams",
    "constant_mortality",
    "convolve_mutation",
    "default_params",
    "expected_velocity",
    "extinction_condition_holds",
    "inverse_trait_mortality",
    "mutation_retention",
    "nearest_neighbor_kernel",
    "point_mass_population",
    "population_step",
    "scalar_step",
    "simulate",
    "upper_bound",
    "validate_params",
    "validate_kernel",
    "__version__",
]
