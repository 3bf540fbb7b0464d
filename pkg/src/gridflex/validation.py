"""Transfer of an optimised threshold across years via the renewable share.

Mean carbon intensity falls roughly linearly as the renewable share of
yearly generation rises, so a threshold tuned on one year can be projected
onto another by shifting it along that regression line:

    X_extrapolated = X_base + slope * (share_target - share_base).

The projection is judged by running it against the target year: the
utilisation it achieves there is compared with the utilisation an actual
optimisation of the target year would pick, and likewise for the thresholds.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .cluster_model import ClusterSetup, WorkloadScenario
from .dispatch import METRIC_FOR_OBJECTIVE, optimise, policy_from_utilisation
from .energy_data import DataQualityError, IntervalSeries, RenewableShareTable


@dataclass(frozen=True)
class ShareRegression:
    """OLS fit of yearly mean intensity against renewable share (percent)."""

    slope: float
    slope_std_error: float
    intercept: float
    r_squared: float
    fit_years: tuple[int, ...]

    def predict(self, share_percent: float) -> float:
        return self.intercept + self.slope * share_percent


def fit_share_regression(table: RenewableShareTable) -> ShareRegression:
    """Fit mean intensity (kg/MWh) on renewable share (percent) by OLS."""
    if len(table) < 3:
        raise DataQualityError(
            f"regression needs at least 3 years, got {len(table)}"
        )
    shares = np.array([r.renewable_share_percent for r in table.rows])
    means = np.array([r.mean_intensity_kg_per_mwh for r in table.rows])
    if np.ptp(shares) < 1e-9:
        raise DataQualityError(
            "renewable share is constant across years; slope is undefined"
        )
    fit = stats.linregress(shares, means)
    return ShareRegression(
        slope=float(fit.slope),
        slope_std_error=float(fit.stderr),
        intercept=float(fit.intercept),
        r_squared=float(fit.rvalue) ** 2,
        fit_years=tuple(r.year for r in table.rows),
    )


def extrapolate_threshold(
    regression: ShareRegression,
    base_threshold: float,
    base_share_percent: float,
    target_share_percent: float,
) -> float:
    """Shift a threshold along the share regression to another year."""
    return base_threshold + regression.slope * (
        target_share_percent - base_share_percent
    )


def achieved_utilisation(
    series: IntervalSeries, threshold: float, objective: str = "emission"
) -> float:
    """Duration fraction of the series at or below the threshold."""
    metric = series.metric(METRIC_FOR_OBJECTIVE[objective])
    below = metric <= threshold
    u = float(np.sum(series.duration_h[below]) / series.t_total)
    if u == 0.0:
        warnings.warn(
            f"threshold {threshold} lies below every interval; the cluster "
            f"would never run",
            stacklevel=2,
        )
    return u


def matching_threshold(
    series: IntervalSeries, utilisation: float, objective: str = "emission"
) -> float:
    """The metric quantile a policy of this utilisation would run at.

    Unlike a policy, which reports no threshold when it never pauses, this
    is a plain quantile lookup: at u = 1 it returns the year's maximum.
    """
    policy = policy_from_utilisation(series, utilisation, objective)
    if policy.threshold is not None:
        return policy.threshold
    return float(np.max(series.metric(policy.metric_name)))


@dataclass(frozen=True)
class ValidationReport:
    """Extrapolated vs. directly optimised dispatch on a target year."""

    base_year: int
    target_year: int
    objective: str
    regression: ShareRegression
    base_utilisation: float
    base_threshold: float
    threshold_extrapolated: float
    utilisation_extrapolated: float
    utilisation_target: float
    threshold_target: float
    utilisation_deviation: float
    threshold_deviation_percent: float


def validate_extrapolation(
    base_series: IntervalSeries,
    target_series: IntervalSeries,
    shares: RenewableShareTable,
    base_year: int,
    target_year: int,
    setup: ClusterSetup,
    workload: WorkloadScenario,
    objective: str = "emission",
) -> ValidationReport:
    """Project the base year's optimum onto the target year and score it."""
    regression = fit_share_regression(shares)
    base = optimise(base_series, setup, workload, objective)
    if base.threshold is None:
        raise DataQualityError(
            f"the {base_year} optimum never pauses (u = 1); there is no "
            f"threshold to extrapolate"
        )
    x_extra = extrapolate_threshold(
        regression,
        base.threshold,
        shares.share(base_year),
        shares.share(target_year),
    )
    u_extra = achieved_utilisation(target_series, x_extra, objective)
    target = optimise(target_series, setup, workload, objective)
    if target.threshold is None:
        raise DataQualityError(
            f"the {target_year} optimum never pauses; deviations are undefined"
        )
    return ValidationReport(
        base_year=base_year,
        target_year=target_year,
        objective=objective,
        regression=regression,
        base_utilisation=base.u_opt,
        base_threshold=base.threshold,
        threshold_extrapolated=x_extra,
        utilisation_extrapolated=u_extra,
        utilisation_target=target.u_opt,
        threshold_target=target.threshold,
        utilisation_deviation=abs(u_extra - target.u_opt),
        threshold_deviation_percent=100.0
        * abs(x_extra - target.threshold)
        / target.threshold,
    )
