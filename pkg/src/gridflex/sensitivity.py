"""Sensitivity of the dispatch optimum to hardware and cost assumptions.

Three parameters get swept: the idle ratio (idle power as a fraction of full
power, which controls how much a pause actually saves), the embedded emission
rate, and the acquisition rate. Each sweep point rebuilds the cluster setup,
so the average power always reflects the modified idle draw, and re-runs the
full optimisation.

The frequency-limit comparison answers a different question: instead of
pausing in dirty hours, the cluster could run throttled all year. Capping
power draw also caps throughput, so holding delivered compute constant
inflates the fleet by 1/(1 - throughput drop), embedded emissions included.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import pandas as pd

from .cluster_model import ClusterSetup, TariffModel, WorkloadScenario
from .dispatch import (
    EmissionBreakdown,
    OptimizationResult,
    emission_total,
    optimise,
    policy_from_utilisation,
)
from .energy_data import IntervalSeries

SWEEP_PARAMS = ("idle_ratio", "embedded_rate", "acq_rate")


@dataclass(frozen=True)
class SweepSpec:
    """Evenly spaced sweep of one setup parameter."""

    param: str
    start: float
    stop: float
    steps: int

    def __post_init__(self) -> None:
        if self.param not in SWEEP_PARAMS:
            raise ValueError(
                f"unknown sweep parameter {self.param!r}, "
                f"expected one of {SWEEP_PARAMS}"
            )
        if self.steps < 2:
            raise ValueError("a sweep needs at least 2 steps")
        if not self.stop > self.start:
            raise ValueError("sweep stop must exceed start")

    def values(self) -> list[float]:
        width = self.stop - self.start
        return [
            self.start + width * i / (self.steps - 1) for i in range(self.steps)
        ]

    def apply(self, setup: ClusterSetup, value: float) -> ClusterSetup:
        if self.param == "idle_ratio":
            return setup.with_idle_ratio(value)
        if self.param == "embedded_rate":
            return setup.with_embedded_rate(value)
        return setup.with_acq_rate(value)


def sweep(
    series: IntervalSeries,
    setup: ClusterSetup,
    workload: WorkloadScenario,
    spec: SweepSpec,
    objective: str = "emission",
    tariff: TariffModel | None = None,
) -> pd.DataFrame:
    """Optimise at every sweep value.

    Returns one row per value with columns: the parameter name, ``u_opt``,
    ``threshold`` (NaN where the optimum never pauses), ``relative_objective``
    and ``total``.
    """
    rows = []
    for value in spec.values():
        result = optimise(series, spec.apply(setup, value), workload,
                          objective, tariff)
        rows.append({
            spec.param: value,
            "u_opt": result.u_opt,
            "threshold": result.threshold,
            "relative_objective": result.relative_objective,
            "total": result.breakdown.total,
        })
    return pd.DataFrame(rows)


def embedded_variation(
    series: IntervalSeries,
    setup: ClusterSetup,
    workload: WorkloadScenario,
    factors: tuple[float, ...] = (0.5, 1.0, 1.5),
) -> dict[float, OptimizationResult]:
    """Re-optimise with the embedded rate scaled by each factor."""
    out = {}
    for factor in factors:
        if factor <= 0.0:
            raise ValueError(f"embedded scale factor must be > 0, got {factor}")
        scaled = setup.with_embedded_rate(
            factor * setup.e_embedded_kg_per_core_hour
        )
        out[factor] = optimise(series, scaled, workload, "emission")
    return out


@dataclass(frozen=True)
class FreqLimitSpec:
    """Effect of a clock-frequency cap: less power, less throughput."""

    power_reduction: float = 0.40
    throughput_drop: float = 0.19

    def __post_init__(self) -> None:
        for name in ("power_reduction", "throughput_drop"):
            v = getattr(self, name)
            if not 0.0 <= v < 1.0:
                raise ValueError(f"{name} must be in [0, 1), got {v}")


def freq_limited_emission(
    series: IntervalSeries,
    setup: ClusterSetup,
    workload: WorkloadScenario,
    spec: FreqLimitSpec = FreqLimitSpec(),
) -> EmissionBreakdown:
    """Emissions of running throttled year-round at constant compute.

    The cap scales the full-load draw by (1 - power_reduction) while idle
    draw is unaffected; the lost throughput is bought back with
    1/(1 - throughput_drop) times the cores, which scales every component.
    """
    capped = dataclasses.replace(
        setup, p_max_w=(1.0 - spec.power_reduction) * setup.p_max_w
    )
    always_on = policy_from_utilisation(series, 1.0, "emission")
    base = emission_total(capped, workload, series, always_on)
    fleet = 1.0 / (1.0 - spec.throughput_drop)
    return EmissionBreakdown.build(
        embedded=fleet * base.embedded,
        operation=fleet * base.operation,
        idle=fleet * base.idle,
    )


@dataclass(frozen=True)
class FreqComparison:
    """Throttled always-on emissions next to both unthrottled references.

    ``ratio`` compares against constant unthrottled operation (u = 1), the
    same baseline the relative objective of an optimisation uses.  The
    dispatch optimum is carried along so callers can place the throttled
    cluster relative to both operating modes.
    """

    spec: FreqLimitSpec
    limited: EmissionBreakdown
    nominal: EmissionBreakdown
    optimum: OptimizationResult
    limited_optimum: OptimizationResult | None = None

    @property
    def ratio(self) -> float:
        return self.limited.total / self.nominal.total

    @property
    def combined_ratio(self) -> float | None:
        """Dispatching the capped cluster instead of running it flat.

        Emissions of the fleet-scaled, clock-limited cluster under its own
        optimal threshold policy, relative to unthrottled constant
        operation. None unless the comparison was built with
        ``optimise_limited``. This combined mode has no published reference
        values; it is provided for exploration.
        """
        if self.limited_optimum is None:
            return None
        fleet = 1.0 / (1.0 - self.spec.throughput_drop)
        return fleet * self.limited_optimum.breakdown.total / self.nominal.total


def compare_freq_limit(
    series: IntervalSeries,
    setup: ClusterSetup,
    workload: WorkloadScenario,
    spec: FreqLimitSpec = FreqLimitSpec(),
    optimise_limited: bool = False,
) -> FreqComparison:
    capped = dataclasses.replace(
        setup, p_max_w=(1.0 - spec.power_reduction) * setup.p_max_w
    )
    always_on = policy_from_utilisation(series, 1.0, "emission")
    return FreqComparison(
        spec=spec,
        limited=freq_limited_emission(series, setup, workload, spec),
        nominal=emission_total(setup, workload, series, always_on),
        optimum=optimise(series, setup, workload, "emission"),
        limited_optimum=(
            optimise(series, capped, workload, "emission")
            if optimise_limited else None
        ),
    )
