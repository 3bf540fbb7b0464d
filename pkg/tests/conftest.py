"""Shared fixtures: the benchmark corpus, small series builders, an oracle.

The full corpus is generated once per session (or read from GRIDFLEX_DATA_DIR
when that points at an existing dataset) and ingested year by year. Only the
canonical interval series and the yearly share table are kept in memory; the
raw generation records are dropped after each year's summary to keep the
footprint flat.

Acceptance tests report through the ``criterion`` fixture, which collects one
PASS/FAIL line per criterion; the lines are printed in the terminal summary
at the end of the run.
"""

from __future__ import annotations

import math
import os
from pathlib import Path
from types import SimpleNamespace

import numpy as np
import pytest

from gridflex import benchmark
from gridflex.cluster_model import average_power
from gridflex.dispatch import METRIC_FOR_OBJECTIVE
from gridflex.energy_data import (
    IntervalSeries,
    RenewableShareTable,
    blend_intensity,
    parse_factors,
    parse_generation,
    parse_prices,
    yearly_summary,
)
from gridflex.units import KW_PER_W, MW_PER_W

ACCEPTANCE_LINES: list[str] = []
DATASET_LABEL = "bundled synthetic benchmark"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreport = terminalreporter
        terminalreport.write_sep("=", f"acceptance criteria [{DATASET_LABEL}]")
        for line in ACCEPTANCE_LINES:
            terminalreport.write_line(line)


@pytest.fixture(scope="session")
def criterion():
    """Recorder producing one PASS/FAIL line per acceptance criterion."""

    def record(cid: str, ok: bool, detail: str) -> bool:
        ACCEPTANCE_LINES.append(f"{cid}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok

    return record


@pytest.fixture(scope="session")
def data_dir(tmp_path_factory) -> Path:
    """Directory with raw generation/price/factor files for every year."""
    env = os.environ.get("GRIDFLEX_DATA_DIR")
    if env:
        global DATASET_LABEL
        DATASET_LABEL = f"external dataset at {env}"
        return Path(env)
    target = tmp_path_factory.mktemp("benchmark_data")
    benchmark.generate_dataset(target)
    return target


@pytest.fixture(scope="session")
def corpus(data_dir):
    """Ingested interval series per year plus the cross-year share table."""
    series: dict[int, IntervalSeries] = {}
    rows = []
    for year in benchmark.DEFAULT_YEARS:
        records = parse_generation(data_dir / f"generation_{year}.csv")
        prices = parse_prices(data_dir / f"prices_{year}.csv")
        factors = parse_factors(data_dir / f"factors_{year}.csv", year)
        one = blend_intensity(records, factors, prices)
        series[year] = one
        rows.extend(yearly_summary({year: one}, {year: records}).rows)
        del records, prices
    return SimpleNamespace(
        data_dir=data_dir,
        series=series,
        shares=RenewableShareTable(rows=tuple(rows)),
    )


@pytest.fixture()
def make_series():
    """Build a small, densely packed series from plain value lists."""

    def build(intensity, price=None, duration_h=1.0,
              start="2024-01-01T00:00:00"):
        intensity = np.asarray(intensity, dtype=np.float64)
        n = len(intensity)
        durations = np.broadcast_to(
            np.asarray(duration_h, dtype=np.float64), (n,)
        ).copy()
        offsets_s = np.concatenate(
            ([0.0], np.cumsum(np.round(durations * 3600.0)[:-1]))
        )
        starts = (
            np.datetime64(start, "s")
            + offsets_s.astype(np.int64).astype("timedelta64[s]")
        )
        if price is None:
            price = intensity
        return IntervalSeries(
            start_utc=starts,
            duration_h=durations,
            intensity=intensity,
            price=np.asarray(price, dtype=np.float64),
        )

    return build


@pytest.fixture(scope="session")
def brute_force():
    """Exhaustive reference optimiser, written directly off the objectives.

    Plain Python sums over every quantile prefix of the (metric, start)
    order; independent of the vectorised implementation. Ties between equal
    totals resolve toward the larger utilisation, running always included.
    """

    def run(series, setup, workload, objective="emission", tariff=None):
        metric_name = METRIC_FOR_OBJECTIVE[objective]
        metric = series.metric(metric_name)
        order = sorted(
            range(len(series)),
            key=lambda i: (metric[i], series.start_utc[i]),
        )
        d = [float(series.duration_h[i]) for i in order]
        m = [float(metric[i]) for i in order]
        t_total = 0.0
        for x in d:
            t_total += x
        p_avg_mw = average_power(setup, workload) * MW_PER_W
        p_idle_mw = setup.p_idle_w * MW_PER_W

        totals = []
        us = []
        covered = 0.0
        run_sum = 0.0
        n = len(order)
        for k in range(1, n + 1):
            covered += d[k - 1]
            run_sum += m[k - 1] * d[k - 1]
            u = 1.0 if k == n else covered / t_total
            pause_sum = 0.0
            for j in range(k, n):
                pause_sum += m[j] * d[j]
            scale = setup.n_cores / u
            if objective == "emission":
                total = scale * (
                    setup.e_embedded_kg_per_core_hour * t_total
                    + p_avg_mw * run_sum
                    + p_idle_mw * pause_sum
                )
            else:
                total = scale * (
                    setup.c_acq_eur_per_core_hour * t_total
                    + setup.p_max_w
                    * KW_PER_W
                    * tariff.c_yearly_demand_eur_per_kw
                    * (t_total / tariff.hours_per_year)
                    + p_avg_mw * run_sum
                    + p_idle_mw * pause_sum
                )
            totals.append(total)
            us.append(u)

        best_k = 0
        best_total = math.inf
        for k, total in enumerate(totals):
            if total <= best_total:
                best_total = total
                best_k = k
        return SimpleNamespace(
            totals=totals,
            utilisations=us,
            best_index=best_k,
            u_opt=us[best_k],
            total=best_total,
            threshold=None if best_k == n - 1 else m[best_k],
        )

    return run
