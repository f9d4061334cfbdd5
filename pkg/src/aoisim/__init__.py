"""Continuous-time simulator and closed-form analytics for age-of-information
minimization at an energy-harvesting status-update source."""

__version__ = "0.1.0"

from .analytics import (
    AOI_LOWER_BOUND,
    AnalyticReport,
    adaptive_gap_bound,
    analytic_report,
    aoi_lower_bound,
    idle_interval_pmf,
    inter_update_moments,
    optimal_threshold,
    threshold_average_aoi,
)
from .aoi_metrics import AoiTally, UpdateLog, accumulate_reward, age_at, integrate_trace
from .arrivals import ArrivalStream, derive_seed, sample_path
from .battery import BatteryState
from .policies import (
    AdaptiveUnitBattery,
    BestEffortUniform,
    ConfigError,
    EnergyAwareAdaptive,
    GreedyUnitBattery,
    Policy,
    ThresholdUnitBattery,
    adaptive_beta,
    adaptive_next_epoch,
    adaptive_unit_next_epoch,
    threshold_delay,
    uniform_schedule,
)
from .runner import (
    EnsembleResult,
    ScalarOptimum,
    compare_unit_battery,
    optimize_scalar,
    run_ensemble,
    sweep_battery,
    uniform_idle_runs,
)
from .simkernel import SimConfig, SimSummary, aoi_gap, run_path, simulate_path

__all__ = [
    "AOI_LOWER_BOUND",
    "AnalyticReport",
    "AoiTally",
    "ArrivalStream",
    "AdaptiveUnitBattery",
    "BatteryState",
    "BestEffortUniform",
    "ConfigError",
    "EnergyAwareAdaptive",
    "EnsembleResult",
    "GreedyUnitBattery",
    "Policy",
    "ScalarOptimum",
    "SimConfig",
    "SimSummary",
    "ThresholdUnitBattery",
    "UpdateLog",
    "accumulate_reward",
    "adaptive_beta",
    "adaptive_gap_bound",
    "adaptive_next_epoch",
    "adaptive_unit_next_epoch",
    "age_at",
    "analytic_report",
    "aoi_gap",
    "aoi_lower_bound",
    "compare_unit_battery",
    "derive_seed",
    "idle_interval_pmf",
    "integrate_trace",
    "inter_update_moments",
    "optimal_threshold",
    "optimize_scalar",
    "run_ensemble",
    "run_path",
    "sample_path",
    "simulate_path",
    "sweep_battery",
    "threshold_average_aoi",
    "threshold_delay",
    "uniform_idle_runs",
    "uniform_schedule",
]
