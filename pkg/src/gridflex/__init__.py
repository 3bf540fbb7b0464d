"""Dispatch optimisation of compute clusters against grid carbon and price.

The package turns public electricity data (generation by type, spot prices,
emission factors) into a per-interval series of carbon intensity and price,
and finds the cluster utilisation that minimises total emissions or total
cost when the lost compute of paused hours is bought back with extra
hardware. Sensitivity sweeps, a frequency-capping comparison and a
share-based threshold extrapolation sit on top of the same optimiser.
"""

from .cluster_model import (
    BUILTIN_SETUPS,
    BUILTIN_WORKLOADS,
    DEFAULT_TARIFF,
    ClusterSetup,
    EmbeddedEstimate,
    Registry,
    TariffModel,
    WorkloadScenario,
    average_power,
    embedded_rate,
    load_config,
    power_at_load,
)
from .dispatch import (
    CostBreakdown,
    DispatchPolicy,
    EmissionBreakdown,
    InvariantViolation,
    OptimizationResult,
    cost_total,
    emission_total,
    optimise,
    policy_from_utilisation,
    switching_count,
)
from .energy_data import (
    DataFormatError,
    DataQualityError,
    EmissionFactorTable,
    GenerationRecord,
    IntervalSeries,
    PriceRecord,
    RenewableShareTable,
    blend_intensity,
    parse_factors,
    parse_generation,
    parse_prices,
    yearly_summary,
)
from .sensitivity import (
    FreqComparison,
    FreqLimitSpec,
    SweepSpec,
    compare_freq_limit,
    embedded_variation,
    freq_limited_emission,
    sweep,
)
from .validation import (
    ShareRegression,
    ValidationReport,
    achieved_utilisation,
    extrapolate_threshold,
    fit_share_regression,
    matching_threshold,
    validate_extrapolation,
)

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_SETUPS",
    "BUILTIN_WORKLOADS",
    "DEFAULT_TARIFF",
    "ClusterSetup",
    "CostBreakdown",
    "DataFormatError",
    "DataQualityError",
    "DispatchPolicy",
    "EmbeddedEstimate",
    "EmissionBreakdown",
    "EmissionFactorTable",
    "FreqComparison",
    "FreqLimitSpec",
    "GenerationRecord",
    "IntervalSeries",
    "InvariantViolation",
    "OptimizationResult",
    "PriceRecord",
    "Registry",
    "RenewableShareTable",
    "ShareRegression",
    "SweepSpec",
    "TariffModel",
    "ValidationReport",
    "WorkloadScenario",
    "achieved_utilisation",
    "average_power",
    "blend_intensity",
    "compare_freq_limit",
    "cost_total",
    "embedded_rate",
    "embedded_variation",
    "emission_total",
    "extrapolate_threshold",
    "fit_share_regression",
    "freq_limited_emission",
    "load_config",
    "matching_threshold",
    "optimise",
    "parse_factors",
    "parse_generation",
    "parse_prices",
    "policy_from_utilisation",
    "power_at_load",
    "sweep",
    "switching_count",
    "validate_extrapolation",
    "yearly_summary",
]
