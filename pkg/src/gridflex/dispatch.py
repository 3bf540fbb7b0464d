"""Threshold dispatch of a cluster and exact optimisation over utilisations.

A dispatch policy runs the cluster in every interval whose metric (carbon
intensity for the emission objective, spot price for cost) lies at or below a
threshold X, and pauses it otherwise. The utilisation u is the duration
fraction of run intervals; X is therefore the u-quantile of the metric over
the series. Keeping delivered compute constant means operating n/u cores at
utilisation u, so totals scale with 1/u:

    E_total = (n/u) [ e_emb t_total + P_avg sum_run(E_i t_i)
                      + P_idle sum_pause(E_j t_j) ]
    C_total = (n/u) [ c_acq t_total + P_max c_demand t_total/8760h
                      + P_avg sum_run(C_i t_i) + P_idle sum_pause(C_j t_j) ]

with per-core powers converted from W to MW against MWh-based metrics and to
kW against the yearly demand charge. Every achievable policy is a prefix of
the intervals sorted by (metric, start time), so the optimiser enumerates all
N prefixes exactly instead of searching a u grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .cluster_model import (
    ClusterSetup,
    TariffModel,
    WorkloadScenario,
    average_power,
)
from .energy_data import IntervalSeries
from .units import KW_PER_W, MW_PER_W


class InvariantViolation(RuntimeError):
    """An internal consistency check failed; results would be untrustworthy."""


#: Objective name -> per-interval metric column.
METRIC_FOR_OBJECTIVE: Mapping[str, str] = {
    "emission": "intensity",
    "cost": "price",
}


def _sort_order(series: IntervalSeries, metric_name: str) -> np.ndarray:
    """Stable order by (metric, start time): ties go to the earlier interval."""
    metric = series.metric(metric_name)
    return np.lexsort((series.start_utc, metric))


@dataclass(frozen=True)
class DispatchPolicy:
    """Run/pause decision for every interval of a series.

    ``threshold`` is None exactly when the cluster never pauses (u = 1);
    otherwise it is the metric value of the costliest interval still run.
    """

    utilisation: float
    threshold: float | None
    run_mask: np.ndarray
    metric_name: str

    def __post_init__(self) -> None:
        if not 0.0 < self.utilisation <= 1.0:
            raise ValueError(
                f"utilisation must be in (0, 1], got {self.utilisation}"
            )
        if self.run_mask.dtype != np.bool_:
            raise TypeError("run_mask must be a boolean array")
        if not self.run_mask.any():
            raise ValueError("policy never runs the cluster")
        if (self.threshold is None) != bool(self.run_mask.all()):
            raise InvariantViolation(
                "threshold must be absent exactly when the cluster never pauses"
            )


def policy_from_utilisation(
    series: IntervalSeries, utilisation: float, objective: str = "emission"
) -> DispatchPolicy:
    """Policy running the cheapest-by-metric utilisation fraction of the time.

    Intervals are taken in (metric, start) order while the running total of
    duration, counted to each interval's midpoint, stays within
    u * t_total. With uniform durations this selects round(u * N) intervals.
    A utilisation too small to cover even one interval is an error.
    """
    metric_name = _metric_name(objective)
    if not 0.0 < utilisation <= 1.0:
        raise ValueError(f"utilisation must be in (0, 1], got {utilisation}")
    order = _sort_order(series, metric_name)
    durations = series.duration_h[order]
    budget = utilisation * series.t_total
    cum_before = np.concatenate(([0.0], np.cumsum(durations)[:-1]))
    selected = cum_before + 0.5 * durations <= budget + 1e-12
    k = int(np.sum(selected))
    if k == 0:
        raise ValueError(
            f"utilisation {utilisation} selects no interval "
            f"(shortest interval midpoint exceeds the budget)"
        )
    mask = np.zeros(len(series), dtype=bool)
    mask[order[:k]] = True
    achieved = float(np.sum(durations[:k]) / series.t_total)
    if k == len(series):
        return DispatchPolicy(
            utilisation=1.0, threshold=None, run_mask=mask,
            metric_name=metric_name,
        )
    threshold = float(series.metric(metric_name)[order[k - 1]])
    return DispatchPolicy(
        utilisation=achieved, threshold=threshold, run_mask=mask,
        metric_name=metric_name,
    )


def _metric_name(objective: str) -> str:
    try:
        return METRIC_FOR_OBJECTIVE[objective]
    except KeyError:
        raise ValueError(
            f"unknown objective {objective!r}, expected one of "
            f"{sorted(METRIC_FOR_OBJECTIVE)}"
        ) from None


# ---------------------------------------------------------------------------
# Totals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EmissionBreakdown:
    """Total emissions in kg CO2, split by origin. Components sum exactly."""

    embedded: float
    operation: float
    idle: float
    total: float

    def __post_init__(self) -> None:
        if self.embedded + self.operation + self.idle != self.total:
            raise InvariantViolation("emission components do not sum to total")

    @classmethod
    def build(cls, embedded: float, operation: float, idle: float
              ) -> "EmissionBreakdown":
        return cls(embedded, operation, idle, embedded + operation + idle)


@dataclass(frozen=True)
class CostBreakdown:
    """Total cost in EUR, split by origin. Components sum exactly."""

    acquisition: float
    demand: float
    operation: float
    idle: float
    total: float

    def __post_init__(self) -> None:
        if self.acquisition + self.demand + self.operation + self.idle != self.total:
            raise InvariantViolation("cost components do not sum to total")

    @classmethod
    def build(cls, acquisition: float, demand: float, operation: float,
              idle: float) -> "CostBreakdown":
        return cls(acquisition, demand, operation, idle,
                   acquisition + demand + operation + idle)


def _weighted_sums(
    series: IntervalSeries, policy: DispatchPolicy
) -> tuple[float, float]:
    """(sum_run(metric*t), sum_pause(metric*t)) for the policy's metric."""
    metric = series.metric(policy.metric_name)
    mt = metric * series.duration_h
    run = float(np.sum(mt[policy.run_mask]))
    pause = float(np.sum(mt[~policy.run_mask]))
    return run, pause


def emission_total(
    setup: ClusterSetup,
    workload: WorkloadScenario,
    series: IntervalSeries,
    policy: DispatchPolicy,
) -> EmissionBreakdown:
    """Total emissions of serving the compute target under the policy."""
    if policy.metric_name != "intensity":
        raise ValueError("emission totals need an intensity-based policy")
    scale = setup.n_cores / policy.utilisation
    p_avg_mw = average_power(setup, workload) * MW_PER_W
    p_idle_mw = setup.p_idle_w * MW_PER_W
    run_sum, pause_sum = _weighted_sums(series, policy)
    return EmissionBreakdown.build(
        embedded=scale * setup.e_embedded_kg_per_core_hour * series.t_total,
        operation=scale * p_avg_mw * run_sum,
        idle=scale * p_idle_mw * pause_sum,
    )


def cost_total(
    setup: ClusterSetup,
    workload: WorkloadScenario,
    series: IntervalSeries,
    policy: DispatchPolicy,
    tariff: TariffModel,
) -> CostBreakdown:
    """Total cost of serving the compute target under the policy."""
    if policy.metric_name != "price":
        raise ValueError("cost totals need a price-based policy")
    scale = setup.n_cores / policy.utilisation
    p_avg_mw = average_power(setup, workload) * MW_PER_W
    p_idle_mw = setup.p_idle_w * MW_PER_W
    run_sum, pause_sum = _weighted_sums(series, policy)
    years = series.t_total / tariff.hours_per_year
    return CostBreakdown.build(
        acquisition=scale * setup.c_acq_eur_per_core_hour * series.t_total,
        demand=scale * setup.p_max_w * KW_PER_W
        * tariff.c_yearly_demand_eur_per_kw * years,
        operation=scale * p_avg_mw * run_sum,
        idle=scale * p_idle_mw * pause_sum,
    )


# ---------------------------------------------------------------------------
# Optimisation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OptimizationResult:
    """Optimal policy plus the full objective curve it was picked from."""

    objective: str
    u_opt: float
    threshold: float | None
    breakdown: EmissionBreakdown | CostBreakdown
    relative_objective: float
    scaled_cores: float
    baseline_total: float
    policy: DispatchPolicy
    curve: dict[str, np.ndarray] = field(repr=False)

    def __post_init__(self) -> None:
        # the ratio only orders policies when the baseline is positive;
        # a negative baseline (net-negative prices) flips its sign
        if self.baseline_total > 0.0 and self.relative_objective > 1.0 + 1e-12:
            raise InvariantViolation(
                f"optimum worse than always-on baseline: "
                f"relative objective {self.relative_objective}"
            )
        if (self.threshold is None) != (self.u_opt == 1.0):
            raise InvariantViolation(
                "threshold must be reported exactly when u_opt < 1"
            )
        u = self.curve.get("u")
        if u is None or abs(float(u[-1]) - 1.0) > 1e-12:
            raise InvariantViolation("objective curve must end at u = 1")


def optimise(
    series: IntervalSeries,
    setup: ClusterSetup,
    workload: WorkloadScenario,
    objective: str = "emission",
    tariff: TariffModel | None = None,
) -> OptimizationResult:
    """Minimise the total objective over every achievable dispatch policy.

    Ties between equal totals resolve toward the largest utilisation: the
    always-on cluster wins unless pausing strictly helps, and no more spare
    hardware is bought than the optimum requires.
    """
    metric_name = _metric_name(objective)
    if objective == "cost" and tariff is None:
        raise ValueError("cost optimisation needs a tariff")

    order = _sort_order(series, metric_name)
    metric = series.metric(metric_name)[order]
    durations = series.duration_h[order]
    t_total = series.t_total
    n = len(series)

    mt = metric * durations
    cum_d = np.cumsum(durations)
    cum_mt = np.cumsum(mt)
    total_mt = cum_mt[-1]

    u = cum_d / t_total
    u[-1] = 1.0
    run_sum = cum_mt
    pause_sum = total_mt - cum_mt

    scale = setup.n_cores / u
    p_avg_mw = average_power(setup, workload) * MW_PER_W
    p_idle_mw = setup.p_idle_w * MW_PER_W

    curve: dict[str, np.ndarray] = {"u": u, "X": metric.copy()}
    if objective == "emission":
        curve["embedded"] = scale * setup.e_embedded_kg_per_core_hour * t_total
        curve["operation"] = scale * p_avg_mw * run_sum
        curve["idle"] = scale * p_idle_mw * pause_sum
        totals = curve["embedded"] + curve["operation"] + curve["idle"]
    else:
        assert tariff is not None
        years = t_total / tariff.hours_per_year
        curve["acquisition"] = scale * setup.c_acq_eur_per_core_hour * t_total
        curve["demand"] = (
            scale * setup.p_max_w * KW_PER_W
            * tariff.c_yearly_demand_eur_per_kw * years
        )
        curve["operation"] = scale * p_avg_mw * run_sum
        curve["idle"] = scale * p_idle_mw * pause_sum
        totals = (
            curve["acquisition"] + curve["demand"]
            + curve["operation"] + curve["idle"]
        )
    curve["total"] = totals

    best = int(np.flatnonzero(totals == totals.min())[-1])
    mask = np.zeros(n, dtype=bool)
    mask[order[: best + 1]] = True
    policy = DispatchPolicy(
        utilisation=float(u[best]),
        threshold=None if best == n - 1 else float(metric[best]),
        run_mask=mask,
        metric_name=metric_name,
    )
    if objective == "emission":
        breakdown: EmissionBreakdown | CostBreakdown = emission_total(
            setup, workload, series, policy
        )
    else:
        breakdown = cost_total(setup, workload, series, policy, tariff)

    baseline = float(totals[-1])
    # a zero baseline (all-renewable series with no embedded term) leaves
    # the ratio undefined; the optimum is then zero as well and no saving
    # is possible, so 1.0 is the honest report
    relative = float(totals[best]) / baseline if baseline != 0.0 else 1.0
    return OptimizationResult(
        objective=objective,
        u_opt=float(u[best]),
        threshold=policy.threshold,
        breakdown=breakdown,
        relative_objective=relative,
        scaled_cores=setup.n_cores / float(u[best]),
        baseline_total=baseline,
        policy=policy,
        curve=curve,
    )


def switching_count(policy: DispatchPolicy) -> int:
    """Number of pauses: maximal blocks of consecutive paused intervals."""
    run = policy.run_mask
    paused = ~run
    starts = paused & np.concatenate(([True], run[:-1]))
    return int(np.sum(starts))
