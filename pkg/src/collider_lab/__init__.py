"""Exact asymptotic bias of adjusted and unadjusted treatment-effect
estimators in linear structural models with M and butterfly structures.

The package answers one recurring design question: when a pretreatment
covariate may be a collider, does adjusting for it help or hurt?  It provides

* closed-form biases for five scenario families (``formulas``), including
  binary-treatment variants built on a probit-style threshold,
* a small linear-SEM covariance engine that derives the same quantities from
  the model graph, as an independent cross-check (``sem``),
* a Monte-Carlo oracle with standard errors (``simulate``),
* grid sweeps, dominance-region fractions, and the figure datasets built
  from them (``sweep``, ``figure_data``),
* a command-line interface covering all of the above (``collider-lab``).

Undefined quantities raise typed exceptions (see ``errors``); numeric
results are never silently NaN.
"""

from .errors import (
    ColliderLabError,
    DomainError,
    EmptyRegionError,
    ParseError,
    RangeError,
    RealizabilityError,
    SimulationError,
    UndefinedEstimatorError,
    ValidationError,
)
from .formulas import BiasResult, bias, bias_ratio
from .kernels import eta, std_normal_cdf, std_normal_pdf, truncated_normal_diff
from .scenarios import (
    BinaryButterflyScenario,
    BinaryMScenario,
    ButterflyScenario,
    MScenario,
    Scenario,
    ValidationReport,
    WtoTScenario,
    noise_loadings,
    parse_scenario_file,
    parse_scenario_text,
    scenario_from_mapping,
    symmetric_butterfly_domain,
    validate,
)
from .sem import (
    CovMatrix,
    LinearSem,
    binary_link,
    build_scenario_sem,
    implied_covariance,
    ols_coefficient,
    parse_sem,
    parse_sem_file,
    scenario_bias,
    scenario_covariance,
)
from .simulate import SimConfig, SimResult, draw_dataset, estimate_bias
from .sweep import (
    ADJUSTED_SMALLER,
    GridAxis,
    GridSpec,
    Predicate,
    SweepTable,
    abs_below,
    below_min_frac,
    emit_csv,
    region_fraction,
    run_sweep,
)
from .figure_data import FIGURE_PANELS, write_figure_datasets

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "ColliderLabError",
    "DomainError",
    "RangeError",
    "ValidationError",
    "RealizabilityError",
    "UndefinedEstimatorError",
    "ParseError",
    "EmptyRegionError",
    "SimulationError",
    # kernels
    "std_normal_cdf",
    "std_normal_pdf",
    "eta",
    "truncated_normal_diff",
    # scenarios
    "Scenario",
    "MScenario",
    "ButterflyScenario",
    "BinaryMScenario",
    "BinaryButterflyScenario",
    "WtoTScenario",
    "ValidationReport",
    "validate",
    "noise_loadings",
    "symmetric_butterfly_domain",
    "parse_scenario_text",
    "parse_scenario_file",
    "scenario_from_mapping",
    # formulas
    "BiasResult",
    "bias",
    "bias_ratio",
    # sem engine
    "LinearSem",
    "CovMatrix",
    "parse_sem",
    "parse_sem_file",
    "implied_covariance",
    "ols_coefficient",
    "binary_link",
    "build_scenario_sem",
    "scenario_covariance",
    "scenario_bias",
    # simulation
    "SimConfig",
    "SimResult",
    "draw_dataset",
    "estimate_bias",
    # sweeps and regions
    "GridAxis",
    "GridSpec",
    "SweepTable",
    "run_sweep",
    "Predicate",
    "ADJUSTED_SMALLER",
    "abs_below",
    "below_min_frac",
    "region_fraction",
    "emit_csv",
    # figure datasets
    "FIGURE_PANELS",
    "write_figure_datasets",
]
