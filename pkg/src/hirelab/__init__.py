"""hirelab: simulation and exact computation for sequential hiring strategies."""

__version__ = "0.1.0"

from .distributions import EXPONENTIAL, TENT, UNIFORM, ScoreDistribution, parse_distribution
from .engine import (
    AllHiredResult,
    ConfigError,
    DensityResult,
    Estimate,
    GrowthStats,
    PowerLawFit,
    SimConfig,
    SuperiorResult,
    density_histogram,
    estimate_all_hired,
    estimate_superior,
    fit_power_law,
    kernel_samples,
    rejection_free_step,
    run_growth,
)
from .strategies import (
    AIS,
    MIS,
    MLIS1,
    CompanyState,
    Decision,
    StrategySpec,
    decide,
    expected_score_threshold,
    lis,
    parse_strategy,
)

__all__ = [
    "AIS",
    "AllHiredResult",
    "CompanyState",
    "ConfigError",
    "Decision",
    "DensityResult",
    "EXPONENTIAL",
    "Estimate",
    "GrowthStats",
    "MIS",
    "MLIS1",
    "PowerLawFit",
    "ScoreDistribution",
    "SimConfig",
    "StrategySpec",
    "SuperiorResult",
    "TENT",
    "UNIFORM",
    "decide",
    "density_histogram",
    "estimate_all_hired",
    "estimate_superior",
    "expected_score_threshold",
    "fit_power_law",
    "kernel_samples",
    "lis",
    "parse_distribution",
    "parse_strategy",
    "rejection_free_step",
    "run_growth",
]
