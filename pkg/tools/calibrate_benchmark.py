#!/usr/bin/env python3
"""Build the frozen calibration behind the bundled benchmark dataset.

The bundled dataset is synthetic, but it is shaped so the dispatch model
produces a specific set of reference operating points (utilisations,
thresholds, relative objectives, sweep behaviour, pause counts, and the
share regression). This tool places the quantile curves analytically,
verifies every design window by running the real optimiser on in-memory
series, tunes the seed that controls the pause count, writes
``src/gridflex/_calibration.py``, and finally regenerates the full dataset
from that file and re-verifies it end to end.

The placement uses the continuous form of the objective. With Q(p) the
intensity quantile curve, A(u) its integral and M = A(1), the per-core rate
of serving the compute target at utilisation u is

    J(u) = [eps + p_idle * M + b * A(u)] / u,      b = p_avg - p_idle,

stationary where Q(u) * u - A(u) = (eps + p_idle * M) / b =: offset. Fixing
a stationary point (u*, X*) therefore pins A(u*) = X* u* - offset, and two
consecutive stationary points on one linear segment obey the trapezoid
rule, which gives the next X in closed form:

    X_j = [off_j + A_{j-1} + (du/2) X_{j-1}] / (u_j - du/2),  du = u_j - u_{j-1}.

The curve is marched through all pinned points and the overall mean M is
bisected until the top tail closes at the designed maximum. The cost curve
works the same way with eps replaced by the acquisition-plus-demand rate.
Two designed operating points are infeasible on any curve satisfying the
rest and stay red on purpose; the tool asserts they ARE red so the
expectations cannot rot.
"""

from __future__ import annotations

import argparse
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path
from pprint import pformat

import numpy as np
from scipy.optimize import brentq

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

import gridflex.benchmark as bench
from gridflex.cluster_model import (
    BUILTIN_SETUPS,
    BUILTIN_WORKLOADS,
    DEFAULT_TARIFF,
    average_power,
)
from gridflex.dispatch import optimise, switching_count
from gridflex.energy_data import IntervalSeries, RenewableShareTable, ShareRow
from gridflex.sensitivity import (
    FreqLimitSpec,
    SweepSpec,
    compare_freq_limit,
    embedded_variation,
    sweep,
)
from gridflex.validation import achieved_utilisation, fit_share_regression

MW = 1e-6  # W -> MW


# ---------------------------------------------------------------------------
# Design targets
# ---------------------------------------------------------------------------

# Interior stationary points of the 2024 emission curve, in utilisation
# order: (u, setup, workload, X_ref, rel_ref). Windows are u +-0.02,
# X +-3%, rel +-0.01.
EMISSION_ROWS = (
    (0.635, "baf_modern", "backfilling", 458.11, 0.918),
    (0.745, "baf_default", "backfilling", 515.01, 0.955),
    (0.882, "baf_modern", "heavy", 607.45, 0.988),
    (0.916, "deep_cm", "backfilling", 635.90, 0.993),
    (0.953, "gridka_arm", "backfilling", 671.458, 0.997),
    (0.975, "baf_default", "heavy", 699.90, 0.998),
    (0.983, "baf_modern", "medium", 714.13, 0.999),
)

# Rows whose optimum must sit at u = 1 (deep_dam rows exactly).
ALWAYS_ON_ROWS = (
    ("baf_default", "medium"),
    ("deep_cm", "medium"),
    ("deep_cm", "heavy"),
    ("deep_dam", "medium"),
    ("deep_dam", "heavy"),
    ("deep_dam", "backfilling"),
    ("gridka_arm", "medium"),
    ("gridka_arm", "heavy"),
)

# Embedded-rate variation of baf_modern/backfilling: scale -> (u, X, rel).
# The x1.5 threshold and relative value cannot land in their windows on any
# curve that also satisfies the nominal row (the integral growth between
# the two stationary points is forced and overshoots); its utilisation and
# the u-ordering across scales stay designed.
EMBEDDED_ROWS = {
    0.5: (0.594, 436.78, 0.896),
    1.0: (0.635, 458.11, 0.918),
    1.5: (0.723, 500.78, 0.949),
}

# Dials of the 2024 emission curve.
X_NOMINAL = 458.8        # nominal stationary threshold (within its window)
A_QUARTER = 24.8         # integral of the bottom quarter of the curve
ARC = ((0.0, 44.0), (0.13, 95.0))   # bottom-arc knots; the p=0.25 value is
                                    # solved so the quarter integral closes
U_X15 = 0.723            # designed stationary point of the x1.5 variation
Q_END_TARGET = 828.0     # curve maximum; stays below every always-on bound

# Threshold extrapolation across years: target year -> share delta vs the
# base year (percent points) and designed deviation of the thresholds (%).
EXTRAPOLATION_DELTA = {2023: 3.4241, 2025: 1.0074}
EXTRAPOLATION_DEV = {2023: 1.42, 2025: 0.68}
ANCHOR_ARCS = {
    2023: ((0.0, 50.0), (0.13, 100.0), (0.25, 180.0)),
    2025: ((0.0, 46.0), (0.13, 92.0), (0.25, 168.0)),
}
ANCHOR_PLATEAU = {2023: 430.0, 2025: 424.0}

SLOPE = -5.4             # kg/MWh per share point, exact by construction
SLOPE_SE = 0.30
SHARE_2024 = 62.7

# Renewable share design, percent, 2002..2022 (2023..2025 derive from
# SHARE_2024 and the extrapolation deltas).
SHARES_EARLY = {
    2002: 8.8, 2003: 9.9, 2004: 11.2, 2005: 12.4, 2006: 13.8,
    2007: 15.6, 2008: 16.9, 2009: 18.2, 2010: 19.1, 2011: 21.9,
    2012: 24.6, 2013: 26.2, 2014: 28.3, 2015: 31.5, 2016: 33.1,
    2017: 36.2, 2018: 38.9, 2019: 42.0, 2020: 45.3, 2021: 42.7,
    2022: 48.4,
}
RESIDUAL_SEED = 20240117

# Cost curve design (2024 prices), rows in utilisation order. The chain is
# tight here: between consecutive stationary points the headroom to the
# rel = 1 ceiling shrinks by d(offset) * (1 - u)/u, so the crossings sit
# compressed near u = 1 or the later rows would pierce their ceilings.
# Every row must come out with u_opt > 0.98 and relative objective >= 0.99.
COST_ROWS = (
    (0.9820, "baf_modern", "backfilling"),
    (0.9895, "baf_default", "backfilling"),
    (0.9967, "baf_modern", "heavy"),
    (0.9976, "baf_default", "heavy"),
    (0.9988, "baf_modern", "medium"),
    (0.9994, "baf_default", "medium"),
)
REL_COST_FIRST = 0.9918  # relative objective of the first (loosest) row
PRICE_NEG_SEGMENT = ((0.0, -90.0), (0.05, 0.0))
PRICE_MID_P = (0.05, 0.50, 0.90)   # mid knots; values scale to close A(u1)
PRICE_MID_Q = (2.0, 55.0, 140.0)
PRICE_END_TARGET = 900.0

# Idle-ratio sweep design: at ratio 0 every setup except gridka_arm drops
# below half of the always-on emissions. gridka_arm cannot on any curve:
# even with a free running phase its embedded share alone exceeds half its
# always-on total. From ratio 0.45 up, every setup sits within 0.005 of 1.
SWEEP_RED = ("gridka_arm",)

FREQ_RATIO_WINDOW = (0.75, 0.85)   # gridka_arm backfilling
PAUSE_WINDOW = (180, 280)
PAUSE_AIM = (208, 252)             # tuning target, safely inside the window

YEARS = tuple(range(2002, 2026))


# ---------------------------------------------------------------------------
# Continuous placement (emission)
# ---------------------------------------------------------------------------


def _setup_consts(setup_name: str, workload_name: str) -> tuple[float, float, float, float]:
    """(eps, p_idle_MW, p_avg_MW, b_MW) per core."""
    setup = BUILTIN_SETUPS[setup_name]
    wl = BUILTIN_WORKLOADS[workload_name]
    p_avg = average_power(setup, wl) * MW
    p_idle = setup.p_idle_w * MW
    return setup.e_embedded_kg_per_core_hour, p_idle, p_avg, p_avg - p_idle


def _offset(rate: float, p_idle: float, m: float, b: float) -> float:
    return (rate + p_idle * m) / b


def _trapz(points) -> float:
    return sum(
        (p1 - p0) * (q0 + q1) / 2.0
        for (p0, q0), (p1, q1) in zip(points, points[1:])
    )


@dataclass
class EmissionPlacement:
    m: float
    segments: tuple
    q_end: float


def _march_emission(m: float) -> EmissionPlacement:
    eps_mb, pi_mb, _, b_mb = _setup_consts("baf_modern", "backfilling")

    # bottom arc: fixed knots, last value solved so the quarter integral
    # closes at A_QUARTER
    arc_end = 2.0 * (A_QUARTER - _trapz(ARC)) / (0.25 - ARC[-1][0]) - ARC[-1][1]
    arc = ARC + ((0.25, arc_end),)

    # nominal stationary point pins A(0.635)
    u1 = EMISSION_ROWS[0][0]
    a_u1 = X_NOMINAL * u1 - _offset(eps_mb, pi_mb, m, b_mb)

    # half-embedded stationary point at u = 0.594 pins the plateau pair
    off_half = _offset(0.5 * eps_mb, pi_mb, m, b_mb)
    u_half = EMBEDDED_ROWS[0.5][0]
    du = u1 - u_half
    q_half = (a_u1 + off_half - du * X_NOMINAL / 2.0) / (u_half + du / 2.0)
    a_half = q_half * u_half - off_half
    q_plateau = 2.0 * (a_half - A_QUARTER) / (u_half - 0.25) - q_half

    # x1.5 stationary point between the nominal and the next pinned row
    off_x15 = _offset(1.5 * eps_mb, pi_mb, m, b_mb)
    du = U_X15 - u1
    q_x15 = (off_x15 + a_u1 + du * X_NOMINAL / 2.0) / (U_X15 - du / 2.0)
    a_prev = q_x15 * U_X15 - off_x15

    points = [(0.25, q_plateau), (u_half, q_half), (u1, X_NOMINAL),
              (U_X15, q_x15)]
    u_prev, x_prev = U_X15, q_x15
    for u, setup_name, wl_name, _, _ in EMISSION_ROWS[1:]:
        eps, p_idle, _, b = _setup_consts(setup_name, wl_name)
        off = _offset(eps, p_idle, m, b)
        du = u - u_prev
        x = (off + a_prev + du * x_prev / 2.0) / (u - du / 2.0)
        a_prev = x * u - off
        points.append((u, x))
        u_prev, x_prev = u, x

    q_end = 2.0 * (m - a_prev) / (1.0 - u_prev) - x_prev
    points.append((1.0, q_end))
    return EmissionPlacement(m=m, segments=(arc, tuple(points)), q_end=q_end)


def _assert_increasing(segments, label: str) -> None:
    qs = [q for seg in segments for _, q in seg]
    if any(b <= a for a, b in zip(qs, qs[1:])):
        raise RuntimeError(f"{label} curve is not strictly increasing: {qs}")


def place_emission_2024() -> EmissionPlacement:
    m_star = brentq(
        lambda m: _march_emission(m).q_end - Q_END_TARGET, 380.0, 420.0,
        xtol=1e-10,
    )
    placement = _march_emission(float(m_star))
    _assert_increasing(placement.segments, "emission 2024")
    return placement


# ---------------------------------------------------------------------------
# Continuous placement (cost)
# ---------------------------------------------------------------------------


def _cost_consts(setup_name: str, workload_name: str) -> tuple[float, float, float, float]:
    """(a0, p_idle_MW, p_avg_MW, b_MW); a0 folds acquisition and demand."""
    setup = BUILTIN_SETUPS[setup_name]
    wl = BUILTIN_WORKLOADS[workload_name]
    a0 = (
        setup.c_acq_eur_per_core_hour
        + setup.p_max_w
        * 1e-3
        * DEFAULT_TARIFF.c_yearly_demand_eur_per_kw
        / DEFAULT_TARIFF.hours_per_year
    )
    p_avg = average_power(setup, wl) * MW
    p_idle = setup.p_idle_w * MW
    return a0, p_idle, p_avg, p_avg - p_idle


@dataclass
class CostPlacement:
    mc: float
    segments: tuple
    q_end: float


def _march_cost(mc: float) -> CostPlacement:
    u1 = COST_ROWS[0][0]
    a0_1, pi_1, pa_1, b_1 = _cost_consts(COST_ROWS[0][1], COST_ROWS[0][2])
    off_1 = _offset(a0_1, pi_1, mc, b_1)
    x1 = REL_COST_FIRST * (a0_1 + pa_1 * mc) / b_1
    a_u1 = x1 * u1 - off_1

    # mid section scales until its integral closes A(u1) on top of the
    # fixed negative bottom
    neg_area = _trapz(PRICE_NEG_SEGMENT)
    coef = _trapz(tuple(zip(PRICE_MID_P, PRICE_MID_Q)))
    last_w = u1 - PRICE_MID_P[-1]
    coef += last_w * PRICE_MID_Q[-1] / 2.0
    fixed = last_w * x1 / 2.0
    scale = (a_u1 - neg_area - fixed) / coef
    mid = tuple((p, q * scale) for p, q in zip(PRICE_MID_P, PRICE_MID_Q))

    points = list(mid) + [(u1, x1)]
    a_prev, u_prev, x_prev = a_u1, u1, x1
    for u, setup_name, wl_name in COST_ROWS[1:]:
        a0, p_idle, _, b = _cost_consts(setup_name, wl_name)
        off = _offset(a0, p_idle, mc, b)
        du = u - u_prev
        x = (off + a_prev + du * x_prev / 2.0) / (u - du / 2.0)
        a_prev = x * u - off
        points.append((u, x))
        u_prev, x_prev = u, x

    q_end = 2.0 * (mc - a_prev) / (1.0 - u_prev) - x_prev
    points.append((1.0, q_end))
    return CostPlacement(
        mc=mc, segments=(PRICE_NEG_SEGMENT, tuple(points)), q_end=q_end,
    )


def place_cost_2024() -> CostPlacement:
    mc_star = brentq(
        lambda mc: _march_cost(mc).q_end - PRICE_END_TARGET, 40.0, 110.0,
        xtol=1e-12,
    )
    placement = _march_cost(float(mc_star))
    _assert_increasing(placement.segments, "cost 2024")
    return placement


# ---------------------------------------------------------------------------
# Anchor years for the extrapolation check
# ---------------------------------------------------------------------------


def place_anchor_year(
    m_target: float, x_target: float, x_extra: float, arc, plateau_start: float
):
    """Curve with one stationary point at u = 0.635 and the projected
    threshold sitting exactly at the 0.648 quantile."""
    eps, p_idle, _, b = _setup_consts("baf_modern", "backfilling")
    a_arc = _trapz(arc)
    a_635 = x_target * 0.635 - _offset(eps, p_idle, m_target, b)
    # plateau knot at 0.594 solved so the integral below 0.635 closes
    w1, w2 = 0.594 - 0.25, 0.635 - 0.594
    q_b = (
        2.0 * (a_635 - a_arc) - w1 * plateau_start - w2 * x_target
    ) / (w1 + w2)
    a_648 = a_635 + (0.648 - 0.635) * (x_target + x_extra) / 2.0
    q_end = 2.0 * (m_target - a_648) / (1.0 - 0.648) - x_extra
    upper = (
        (0.25, plateau_start), (0.594, q_b), (0.635, x_target),
        (0.648, x_extra), (1.0, q_end),
    )
    segments = (arc, upper)
    _assert_increasing(segments, "anchor year")
    return segments


# ---------------------------------------------------------------------------
# In-memory series and window checks
# ---------------------------------------------------------------------------


def curve_series(
    curve, year: int, *, metric: str = "intensity",
    mean_target: float | None = None,
) -> IntervalSeries:
    """The discrete series the generator will produce, minus the time
    ordering: uniform intervals whose sorted values are the curve's grid
    quantiles. Ordering only matters for the pause count, which is checked
    separately."""
    step_h = 0.25 if year >= bench.FINE_RESOLUTION_FROM_YEAR else 1.0
    stamps, n = bench._timestamps(year, step_h)
    p = (np.arange(n) + 0.5) / n
    values = bench.eval_quantile_curve(curve, p)
    if mean_target is not None:
        values = values + (mean_target - values.mean())
    ones = np.full(n, step_h)
    if metric == "intensity":
        return IntervalSeries(stamps, ones, values, np.zeros(n))
    return IntervalSeries(stamps, ones, np.full(n, 100.0), values)


class Checker:
    def __init__(self) -> None:
        self.failures: list[str] = []

    def check(self, label: str, ok: bool, detail: str) -> None:
        print(f"  [{'ok ' if ok else 'FAIL'}] {label}: {detail}")
        if not ok:
            self.failures.append(f"{label}: {detail}")

    def expect_red(self, label: str, red: bool, detail: str) -> None:
        # designed-red checks must stay red, or the recorded expectations
        # have rotted
        print(f"  [{'red' if red else 'FAIL(went green)'}] {label}: {detail}")
        if not red:
            self.failures.append(f"{label} unexpectedly green: {detail}")


def verify_emission(ch: Checker, series: IntervalSeries) -> float:
    print("2024 emission operating points:")
    x_nominal = None
    for u_ref, setup_name, wl_name, x_ref, rel_ref in EMISSION_ROWS:
        res = optimise(series, BUILTIN_SETUPS[setup_name],
                       BUILTIN_WORKLOADS[wl_name], "emission")
        ok = (
            abs(res.u_opt - u_ref) <= 0.02
            and res.threshold is not None
            and abs(res.threshold - x_ref) <= 0.03 * x_ref
            and abs(res.relative_objective - rel_ref) <= 0.01
        )
        ch.check(
            f"{setup_name}/{wl_name}",
            ok,
            f"u={res.u_opt:.4f} (ref {u_ref}), X={res.threshold:.2f} "
            f"(ref {x_ref}), rel={res.relative_objective:.4f} (ref {rel_ref})",
        )
        if (setup_name, wl_name) == ("baf_modern", "backfilling"):
            x_nominal = float(res.threshold)
    for setup_name, wl_name in ALWAYS_ON_ROWS:
        res = optimise(series, BUILTIN_SETUPS[setup_name],
                       BUILTIN_WORKLOADS[wl_name], "emission")
        exact = setup_name == "deep_dam"
        ok = res.u_opt == 1.0 if exact else res.u_opt > 0.98
        ch.check(
            f"{setup_name}/{wl_name} always-on{' (exact)' if exact else ''}",
            ok and res.threshold is None,
            f"u={res.u_opt}",
        )
    return x_nominal


def verify_embedded(ch: Checker, series: IntervalSeries) -> None:
    print("embedded variation (baf_modern/backfilling):")
    results = embedded_variation(
        series, BUILTIN_SETUPS["baf_modern"], BUILTIN_WORKLOADS["backfilling"],
    )
    u_values = []
    for factor, (u_ref, x_ref, rel_ref) in EMBEDDED_ROWS.items():
        res = results[factor]
        u_values.append(res.u_opt)
        u_ok = abs(res.u_opt - u_ref) <= 0.02
        x_ok = abs(res.threshold - x_ref) <= 0.03 * x_ref
        rel_ok = abs(res.relative_objective - rel_ref) <= 0.01
        detail = (
            f"u={res.u_opt:.4f} (ref {u_ref}), X={res.threshold:.2f} "
            f"(ref {x_ref}), rel={res.relative_objective:.4f} (ref {rel_ref})"
        )
        if factor == 1.5:
            ch.check(f"x{factor} utilisation", u_ok, detail)
            ch.expect_red(f"x{factor} threshold", not x_ok, detail)
            ch.expect_red(f"x{factor} relative", not rel_ok, detail)
        else:
            ch.check(f"x{factor}", u_ok and x_ok and rel_ok, detail)
    ch.check(
        "embedded ordering",
        u_values[0] < u_values[1] < u_values[2],
        f"u: {u_values[0]:.4f} < {u_values[1]:.4f} < {u_values[2]:.4f}",
    )


def verify_sweeps(ch: Checker, series: IntervalSeries) -> None:
    print("idle-ratio sweeps (backfilling):")
    spec = SweepSpec("idle_ratio", 0.0, 1.0, 51)
    for setup_name in BUILTIN_SETUPS:
        frame = sweep(series, BUILTIN_SETUPS[setup_name],
                      BUILTIN_WORKLOADS["backfilling"], spec, "emission")
        rel = frame["relative_objective"].to_numpy()
        ratios = frame["idle_ratio"].to_numpy()
        at_zero = rel[0]
        if setup_name in SWEEP_RED:
            ch.expect_red(
                f"{setup_name} rel(0) < 0.5", not at_zero < 0.5,
                f"rel(0)={at_zero:.4f}",
            )
        else:
            ch.check(
                f"{setup_name} rel(0) < 0.5", at_zero < 0.5,
                f"rel(0)={at_zero:.4f}",
            )
        high = rel[ratios >= 0.45 - 1e-12]
        ch.check(
            f"{setup_name} rel ~ 1 beyond ratio 0.45",
            bool(np.all(np.abs(high - 1.0) <= 0.005)),
            f"max deviation {np.max(np.abs(high - 1.0)):.5f}",
        )
        diffs = np.diff(rel)
        ch.check(
            f"{setup_name} monotone",
            bool(np.all(diffs >= -1e-9)),
            f"min step {diffs.min():.3e}",
        )


def verify_freq(ch: Checker, series: IntervalSeries) -> None:
    print("frequency-limit comparison (gridka_arm):")
    backf = compare_freq_limit(
        series, BUILTIN_SETUPS["gridka_arm"], BUILTIN_WORKLOADS["backfilling"],
        FreqLimitSpec(),
    )
    ch.check(
        "backfilling ratio",
        FREQ_RATIO_WINDOW[0] <= backf.ratio <= FREQ_RATIO_WINDOW[1],
        f"ratio={backf.ratio:.4f} in {FREQ_RATIO_WINDOW}",
    )
    medium = compare_freq_limit(
        series, BUILTIN_SETUPS["gridka_arm"], BUILTIN_WORKLOADS["medium"],
        FreqLimitSpec(),
    )
    ch.check("medium ratio > 1", medium.ratio > 1.0,
             f"ratio={medium.ratio:.4f}")


def verify_cost(ch: Checker, series: IntervalSeries) -> None:
    print("2024 cost operating points:")
    for _, setup_name, wl_name in COST_ROWS:
        res = optimise(series, BUILTIN_SETUPS[setup_name],
                       BUILTIN_WORKLOADS[wl_name], "cost", DEFAULT_TARIFF)
        x_txt = "-" if res.threshold is None else f"{res.threshold:.2f}"
        ch.check(
            f"{setup_name}/{wl_name}",
            res.u_opt > 0.98 and res.relative_objective >= 0.99,
            f"u={res.u_opt:.4f}, rel={res.relative_objective:.5f}, X={x_txt}",
        )


def verify_extrapolation(
    ch: Checker, x_base: float,
    anchor_series: dict[int, IntervalSeries], shares: dict[int, float],
) -> None:
    print("threshold extrapolation:")
    for year in sorted(EXTRAPOLATION_DELTA):
        x_extra = x_base + SLOPE * (shares[year] - shares[2024])
        series = anchor_series[year]
        u_extra = achieved_utilisation(series, x_extra)
        res = optimise(series, BUILTIN_SETUPS["baf_modern"],
                       BUILTIN_WORKLOADS["backfilling"], "emission")
        dev = 100.0 * abs(x_extra - res.threshold) / res.threshold
        ch.check(
            f"{year}",
            abs(u_extra - res.u_opt) <= 0.02 and dev <= 3.0,
            f"u_extra={u_extra:.4f} vs u_opt={res.u_opt:.4f}, "
            f"X_extra={x_extra:.2f} vs X_opt={res.threshold:.2f} "
            f"(dev {dev:.2f}%)",
        )


# ---------------------------------------------------------------------------
# Share table and regression design
# ---------------------------------------------------------------------------


def design_share_table(m_2024: float) -> tuple[dict[int, float], dict[int, float]]:
    """Shares and yearly mean intensities whose OLS fit has exactly the
    designed slope and standard error: pinned years carry zero residual,
    the rest get a seeded residual projected orthogonal to the regressors
    and scaled to the target error."""
    shares = dict(SHARES_EARLY)
    shares[2024] = SHARE_2024
    for year, delta in EXTRAPOLATION_DELTA.items():
        shares[year] = SHARE_2024 - delta
    intercept = m_2024 - SLOPE * SHARE_2024

    pinned = (2023, 2024, 2025)
    free = [y for y in YEARS if y not in pinned]
    x_all = np.array([shares[y] for y in YEARS])
    rng = np.random.default_rng(RESIDUAL_SEED)
    raw = rng.normal(0.0, 1.0, len(free))
    basis = np.stack([np.ones(len(free)),
                      np.array([shares[y] for y in free])])
    coeffs = np.linalg.solve(basis @ basis.T, basis @ raw)
    resid = raw - basis.T @ coeffs

    sxx = float(np.sum((x_all - x_all.mean()) ** 2))
    sse_target = SLOPE_SE**2 * (len(YEARS) - 2) * sxx
    resid *= np.sqrt(sse_target / float(np.sum(resid**2)))

    means = {y: intercept + SLOPE * shares[y] for y in YEARS}
    for y, r in zip(free, resid):
        means[y] += float(r)
    return shares, means


def verify_regression(ch: Checker, shares: dict[int, float],
                      means: dict[int, float]) -> None:
    table = RenewableShareTable(rows=tuple(
        ShareRow(y, shares[y], means[y]) for y in YEARS
    ))
    reg = fit_share_regression(table)
    ch.check(
        "design slope",
        abs(reg.slope - SLOPE) < 1e-9
        and abs(reg.slope_std_error - SLOPE_SE) < 1e-6,
        f"slope={reg.slope:.6f} +- {reg.slope_std_error:.4f}, "
        f"r2={reg.r_squared:.3f}",
    )


# ---------------------------------------------------------------------------
# Pause tuning
# ---------------------------------------------------------------------------


def count_pauses(values: np.ndarray, threshold: float) -> int:
    paused = values > threshold
    return int(np.sum(paused & ~np.concatenate(([False], paused[:-1]))))


# Fixed non-searched shape parameters.
SHAPE_BASE = {
    "shape_weekly": 0.10,
    "price_coupling": 0.60,
    "price_diurnal": 0.25,
}

# Search grid for the pause tuning: smoother synoptic processes and less
# noise both cut the number of threshold crossings.
PAUSE_GRID = {
    "shape_tau_h": (180.0, 260.0, 360.0, 500.0),
    "shape_diurnal": (0.25, 0.35, 0.45),
    "shape_noise": (0.03, 0.06, 0.10),
}


def _cfg_stub(proto: dict) -> bench.BenchmarkConfig:
    return bench.BenchmarkConfig(
        intensity_curves={}, price_curves={}, generic_intensity_shape=(),
        generic_price_shape=(), mean_intensity={}, intensity_spread={},
        price_level={}, renewable_share_percent={}, total_generation_gw={},
        emission_factors={}, intensity_seed={}, **SHAPE_BASE, **proto,
    )


def tune_pause_shape(curve, m_2024: float, x_opt: float
                     ) -> tuple[dict, int, int]:
    """Pick shape parameters and the 2024 seed whose time ordering yields
    the aimed pause count. Replays exactly the generator's value pipeline:
    same process, same rank transform, same recentering."""
    _, n = bench._timestamps(2024, 0.25)
    best: tuple[dict, int, int] | None = None
    for tau in PAUSE_GRID["shape_tau_h"]:
        for diurnal in PAUSE_GRID["shape_diurnal"]:
            for noise in PAUSE_GRID["shape_noise"]:
                proto = {"shape_tau_h": tau, "shape_diurnal": diurnal,
                         "shape_noise": noise}
                cfg = _cfg_stub(proto)
                for seed in range(40):
                    rng = np.random.default_rng(seed)
                    z = bench._shape_process(rng, n, 0.25, cfg)
                    values = bench.eval_quantile_curve(
                        curve, bench._ranks_to_p(z)
                    )
                    values = values + (m_2024 - values.mean())
                    pauses = count_pauses(values, x_opt)
                    if PAUSE_AIM[0] <= pauses <= PAUSE_AIM[1]:
                        return proto, seed, pauses
                    if best is None or abs(pauses - 230) < abs(best[2] - 230):
                        best = (proto, seed, pauses)
    raise RuntimeError(f"no grid point hit the pause aim {PAUSE_AIM}; "
                       f"closest {best}")


# ---------------------------------------------------------------------------
# Remaining frozen tables
# ---------------------------------------------------------------------------

EMISSION_FACTORS = {
    "solar": 35.0,
    "wind_onshore": 12.0,
    "wind_offshore": 13.0,
    "hydro": 11.0,
    "biomass": 120.0,
    "gas": 490.0,
    "hard_coal": 1050.0,
    "lignite": 1150.0,
    "pumped_storage": 300.0,
}

GENERIC_INTENSITY_SHAPE = ((
    (0.0, -1.00), (0.10, -0.72), (0.30, -0.38), (0.50, -0.05),
    (0.70, 0.28), (0.90, 0.62), (0.98, 0.87), (1.0, 1.05),
),)

GENERIC_PRICE_SHAPE = ((
    (0.0, -2.2), (0.05, -1.1), (0.30, -0.45), (0.50, 0.0),
    (0.80, 0.55), (0.95, 1.3), (0.99, 2.6), (1.0, 6.0),
),)

PRICE_LEVEL = {
    2002: (27.0, 8.0), 2003: (29.0, 9.0), 2004: (30.0, 9.0),
    2005: (40.0, 13.0), 2006: (47.0, 16.0), 2007: (38.0, 14.0),
    2008: (63.0, 20.0), 2009: (39.0, 14.0), 2010: (44.0, 13.0),
    2011: (51.0, 13.0), 2012: (43.0, 14.0), 2013: (38.0, 14.0),
    2014: (33.0, 12.0), 2015: (32.0, 12.0), 2016: (29.0, 12.0),
    2017: (34.0, 15.0), 2018: (44.0, 16.0), 2019: (38.0, 15.0),
    2020: (30.0, 17.0), 2021: (97.0, 55.0), 2022: (170.0, 90.0),
    2023: (95.0, 48.0), 2025: (78.0, 42.0),
}


def spread_for(mean: float) -> float:
    # keep the top of generic years below the fossil-blend feasibility
    # ceiling of the mix solve (shape maximum is 1.05)
    return round(min(0.42 * mean, (1035.0 - mean) / 1.05), 3)


def total_generation_table(rng: np.random.Generator) -> dict[int, float]:
    return {
        year: round(float(48.0 + 0.45 * (year - 2002) + rng.uniform(-1.5, 1.5)), 2)
        for year in YEARS
    }


# ---------------------------------------------------------------------------
# Assembly, file writing, end-to-end verification
# ---------------------------------------------------------------------------


def build_calibration() -> tuple[dict, Checker]:
    ch = Checker()

    placement = place_emission_2024()
    m_2024 = placement.m
    print(f"2024 emission curve: M = {m_2024:.4f}, top = {placement.q_end:.2f}")
    series_2024 = curve_series(placement.segments, 2024, mean_target=m_2024)
    x_opt = verify_emission(ch, series_2024)
    verify_embedded(ch, series_2024)
    verify_sweeps(ch, series_2024)
    verify_freq(ch, series_2024)

    shares, means = design_share_table(m_2024)
    verify_regression(ch, shares, means)

    anchor_curves = {}
    anchor_series = {}
    for year in EXTRAPOLATION_DELTA:
        x_extra = X_NOMINAL + SLOPE * (shares[year] - shares[2024])
        x_target = x_extra / (1.0 + EXTRAPOLATION_DEV[year] / 100.0)
        anchor_curves[year] = place_anchor_year(
            means[year], x_target, x_extra, ANCHOR_ARCS[year],
            ANCHOR_PLATEAU[year],
        )
        anchor_series[year] = curve_series(anchor_curves[year], year,
                                           mean_target=means[year])
    verify_extrapolation(ch, x_opt, anchor_series, shares)

    cost = place_cost_2024()
    print(f"2024 price curve: Mc = {cost.mc:.4f}, top = {cost.q_end:.2f}")
    price_series = curve_series(cost.segments, 2024, metric="price")
    verify_cost(ch, price_series)

    proto, seed_2024, pauses = tune_pause_shape(
        placement.segments, m_2024, x_opt
    )
    ch.check(
        "pause count",
        PAUSE_WINDOW[0] <= pauses <= PAUSE_WINDOW[1],
        f"{pauses} pauses with seed {seed_2024} and {proto}",
    )

    seeds = {year: 7000 + 13 * (year - 2000) for year in YEARS}
    seeds[2024] = seed_2024

    calibration = {
        "INTENSITY_CURVES": {
            2023: anchor_curves[2023],
            2024: placement.segments,
            2025: anchor_curves[2025],
        },
        "PRICE_CURVES": {2024: cost.segments},
        "GENERIC_INTENSITY_SHAPE": GENERIC_INTENSITY_SHAPE,
        "GENERIC_PRICE_SHAPE": GENERIC_PRICE_SHAPE,
        "MEAN_INTENSITY": means,
        "INTENSITY_SPREAD": {
            y: spread_for(means[y]) for y in YEARS if y < 2023
        },
        "PRICE_LEVEL": PRICE_LEVEL,
        "RENEWABLE_SHARE_PERCENT": shares,
        "TOTAL_GENERATION_GW": total_generation_table(
            np.random.default_rng(RESIDUAL_SEED + 1)
        ),
        "EMISSION_FACTORS": EMISSION_FACTORS,
        "SHAPE_TAU_H": proto["shape_tau_h"],
        "SHAPE_DIURNAL": proto["shape_diurnal"],
        "SHAPE_WEEKLY": SHAPE_BASE["shape_weekly"],
        "SHAPE_NOISE": proto["shape_noise"],
        "PRICE_COUPLING": SHAPE_BASE["price_coupling"],
        "PRICE_DIURNAL": SHAPE_BASE["price_diurnal"],
        "INTENSITY_SEED": seeds,
    }
    return calibration, ch


def write_calibration(calibration: dict, path: Path) -> None:
    lines = [
        '"""Frozen constants of the bundled benchmark dataset.',
        "",
        "Generated by tools/calibrate_benchmark.py; edit the tool, not this",
        "file. Quantile curves are tuples of piecewise-linear segments over",
        "the rank axis; a gap between consecutive segments is a jump of the",
        'distribution."""',
        "",
    ]
    for key, value in calibration.items():
        lines.append(f"{key} = {pformat(value, width=76)}")
        lines.append("")
    path.write_text("\n".join(lines), encoding="utf-8")
    print(f"wrote {path}")


def verify_files(ch: Checker, data_dir: Path) -> None:
    from gridflex.energy_data import (
        blend_intensity, parse_factors, parse_generation, parse_prices,
        yearly_summary,
    )

    print("end-to-end on generated files:")
    bench.generate_dataset(data_dir, YEARS, bench.default_config())

    series_by_year = {}
    records_by_year = {}
    for year in YEARS:
        records = parse_generation(data_dir / f"generation_{year}.csv")
        prices = parse_prices(data_dir / f"prices_{year}.csv")
        factors = parse_factors(data_dir / f"factors_{year}.csv", year)
        series_by_year[year] = blend_intensity(records, factors, prices)
        records_by_year[year] = records

    table = yearly_summary(series_by_year, records_by_year)
    reg = fit_share_regression(table)
    ch.check(
        "file-level slope",
        -6.0 <= reg.slope <= -4.8,
        f"slope={reg.slope:.4f} +- {reg.slope_std_error:.4f}",
    )

    series_2024 = series_by_year[2024]
    x_opt = verify_emission(ch, series_2024)
    verify_embedded(ch, series_2024)
    verify_sweeps(ch, series_2024)
    verify_freq(ch, series_2024)
    verify_cost(ch, series_2024)
    verify_extrapolation(
        ch, x_opt,
        {y: series_by_year[y] for y in EXTRAPOLATION_DELTA},
        {y: table.share(y) for y in (2023, 2024, 2025)},
    )

    res = optimise(series_2024, BUILTIN_SETUPS["baf_modern"],
                   BUILTIN_WORKLOADS["backfilling"], "emission")
    pauses = switching_count(res.policy)
    ch.check(
        "file-level pause count",
        PAUSE_WINDOW[0] <= pauses <= PAUSE_WINDOW[1],
        f"{pauses} pauses at u={res.u_opt:.4f}",
    )


def main() -> int:
    ap = argparse.ArgumentParser(
        description="regenerate and verify src/gridflex/_calibration.py"
    )
    ap.add_argument("--out", type=Path,
                    default=Path(__file__).resolve().parent.parent
                    / "src" / "gridflex" / "_calibration.py")
    ap.add_argument("--skip-files", action="store_true",
                    help="placement and in-memory checks only")
    ap.add_argument("--data-dir", type=Path, default=None,
                    help="write the verification dataset here instead of "
                         "a temporary directory")
    args = ap.parse_args()

    calibration, ch = build_calibration()
    if ch.failures:
        print(f"\n{len(ch.failures)} placement check(s) failed:")
        for f in ch.failures:
            print(f"  - {f}")
        return 1

    write_calibration(calibration, args.out)

    if not args.skip_files:
        ch2 = Checker()
        if args.data_dir is not None:
            args.data_dir.mkdir(parents=True, exist_ok=True)
            verify_files(ch2, args.data_dir)
        else:
            with tempfile.TemporaryDirectory() as tmp:
                verify_files(ch2, Path(tmp))
        if ch2.failures:
            print(f"\n{len(ch2.failures)} file-level check(s) failed:")
            for f in ch2.failures:
                print(f"  - {f}")
            return 1

    print("\nall calibration checks passed")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
