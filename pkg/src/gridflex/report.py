"""Result documents, plot-ready curve exports and summary tables.

The optimiser already returns everything needed to reproduce the published
tables and figures; this module fixes the on-disk shapes. A single run
becomes a JSON document plus two CSV files (the objective curve and the
interval schedule), and a directory of such runs can be folded into summary
tables afterwards. All writers are deterministic: rerunning a command on
identical inputs produces identical bytes, so no timestamps or host names
appear anywhere. Where an output derives from input files, a provenance
block records their SHA-256 checksums next to the tool version, which makes
"same numbers, different data" distinguishable from a code change.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from pathlib import Path
from typing import Any, Iterable, Mapping

import numpy as np
import pandas as pd

from . import __version__
from .cluster_model import ClusterSetup, WorkloadScenario
from .dispatch import DispatchPolicy, OptimizationResult, switching_count
from .energy_data import DataFormatError, IntervalSeries
from .validation import ValidationReport

TOOL_NAME = "gridflex"

#: Breakdown columns per objective, in curve-file order.
CURVE_COMPONENTS: Mapping[str, tuple[str, ...]] = {
    "emission": ("embedded", "operation", "idle"),
    "cost": ("acquisition", "demand", "operation", "idle"),
}

#: Column order of the per-run summary tables.
RESULT_COLUMNS = ("setup", "workload", "u_opt", "threshold",
                  "relative_objective")

#: Column order of the extrapolation table (ValidationReport field names).
VALIDATION_COLUMNS = (
    "base_year", "target_year", "objective",
    "base_utilisation", "base_threshold", "threshold_extrapolated",
    "utilisation_extrapolated", "utilisation_target", "threshold_target",
    "utilisation_deviation", "threshold_deviation_percent",
)

#: Summary-table name -> file written by ``write_tables``.
TABLE_FILES: Mapping[str, str] = {
    "emission": "emission_table.csv",
    "cost": "cost_table.csv",
    "embedded": "embedded_table.csv",
    "validation": "validation_table.csv",
}


def file_sha256(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def provenance_block(inputs: Mapping[str, str | Path]) -> dict[str, Any]:
    """Checksummed record of the exact input files behind an output.

    The block changes iff one of the files changes (or the tool version
    does); it never contains wall-clock time, so identical reruns stay
    byte-identical.
    """
    return {
        "tool": {"name": TOOL_NAME, "version": __version__},
        "inputs": {
            str(label): {"path": str(path), "sha256": file_sha256(path)}
            for label, path in sorted(inputs.items())
        },
    }


def write_json(payload: Mapping[str, Any], path: str | Path) -> Path:
    """Serialise with sorted keys and a trailing newline (byte-stable)."""
    out = Path(path)
    text = json.dumps(payload, indent=2, sort_keys=True, allow_nan=False)
    out.write_text(text + "\n", encoding="utf-8")
    return out


# ---------------------------------------------------------------------------
# Per-run exports
# ---------------------------------------------------------------------------


def curve_frame(result: OptimizationResult, setup: ClusterSetup
                ) -> pd.DataFrame:
    """Objective curve as plot-ready rows, one per achievable utilisation.

    Columns: ``u``, the threshold ``X`` that realises the row's policy, one
    column per breakdown component, their sum ``total``, the constant-compute
    fleet size ``n_cores_scaled`` = n_cores / u, and an ``is_optimum`` marker
    that is 1 exactly once. Every number in the summary tables can be
    recomputed from these rows; in particular the relative objective is the
    marked row's total over the last row's total.
    """
    if abs(setup.n_cores / result.u_opt - result.scaled_cores) > 1e-9 * (
        result.scaled_cores
    ):
        raise ValueError(
            f"setup {setup.name!r} does not match the optimisation result "
            f"(n_cores / u_opt != scaled_cores)"
        )
    curve = result.curve
    data: dict[str, Any] = {"u": curve["u"], "X": curve["X"]}
    for name in CURVE_COMPONENTS[result.objective]:
        data[name] = curve[name]
    totals = curve["total"]
    data["total"] = totals
    data["n_cores_scaled"] = setup.n_cores / curve["u"]
    marker = np.zeros(len(totals), dtype=int)
    marker[int(np.flatnonzero(totals == totals.min())[-1])] = 1
    data["is_optimum"] = marker
    return pd.DataFrame(data)


def schedule_frame(series: IntervalSeries, policy: DispatchPolicy
                   ) -> pd.DataFrame:
    """Per-interval dispatch decision (``run`` is 1 where the cluster runs)."""
    if len(policy.run_mask) != len(series):
        raise ValueError(
            f"policy covers {len(policy.run_mask)} intervals, "
            f"series has {len(series)}"
        )
    stamps = np.datetime_as_string(
        series.start_utc.astype("datetime64[s]"), unit="s", timezone="UTC"
    )
    return pd.DataFrame({
        "start_utc": [s.replace("Z", "+00:00") for s in stamps],
        "run": policy.run_mask.astype(int),
    })


def result_payload(
    setup: ClusterSetup,
    workload: WorkloadScenario,
    result: OptimizationResult,
    *,
    embedded_factor: float = 1.0,
    series: IntervalSeries | None = None,
    provenance: Mapping[str, Any] | None = None,
) -> dict[str, Any]:
    """JSON document for one optimisation run (the ``result.json`` schema).

    ``threshold`` is null exactly when the optimum never pauses, matching
    the published tables where an always-on optimum has no threshold entry.
    """
    payload: dict[str, Any] = {
        "objective": result.objective,
        "setup": setup.name,
        "workload": workload.name,
        "embedded_factor": embedded_factor,
        "u_opt": result.u_opt,
        "threshold": result.threshold,
        "relative_objective": result.relative_objective,
        "total": result.breakdown.total,
        "baseline_total": result.baseline_total,
        "scaled_cores": result.scaled_cores,
        "pause_count": switching_count(result.policy),
        "breakdown": dataclasses.asdict(result.breakdown),
    }
    if series is not None:
        payload["series"] = {
            "intervals": len(series),
            "t_total_h": series.t_total,
        }
    if provenance is not None:
        payload["provenance"] = dict(provenance)
    return payload


def validation_payload(
    report: ValidationReport,
    *,
    provenance: Mapping[str, Any] | None = None,
) -> dict[str, Any]:
    """JSON document for one extrapolation check (``validation.json``)."""
    payload = dataclasses.asdict(report)
    payload["regression"]["fit_years"] = list(payload["regression"]["fit_years"])
    if provenance is not None:
        payload["provenance"] = dict(provenance)
    return payload


# ---------------------------------------------------------------------------
# Aggregation over a directory of runs
# ---------------------------------------------------------------------------


_REQUIRED_RESULT_KEYS = ("objective", "setup", "workload", "u_opt",
                         "threshold", "relative_objective")


def _load_json(path: Path) -> dict[str, Any]:
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataFormatError(f"{path}: not valid JSON: {exc}") from exc


def collect_run_documents(
    out_dir: str | Path,
) -> tuple[list[dict[str, Any]], list[dict[str, Any]]]:
    """Load every ``result.json`` and ``validation.json`` under a tree.

    Files are visited in sorted path order so the aggregate tables come out
    identical on every run. Documents missing required keys, or claiming a
    threshold on an always-on optimum, are rejected outright.
    """
    root = Path(out_dir)
    results: list[dict[str, Any]] = []
    for path in sorted(root.rglob("result.json")):
        doc = _load_json(path)
        missing = [k for k in _REQUIRED_RESULT_KEYS if k not in doc]
        if missing:
            raise DataFormatError(
                f"{path}: result document is missing keys {missing}"
            )
        if (doc["threshold"] is None) != (doc["u_opt"] == 1.0):
            raise DataFormatError(
                f"{path}: threshold must be null exactly when u_opt = 1"
            )
        results.append(doc)
    validations: list[dict[str, Any]] = []
    for path in sorted(root.rglob("validation.json")):
        doc = _load_json(path)
        missing = [k for k in VALIDATION_COLUMNS if k not in doc]
        if missing:
            raise DataFormatError(
                f"{path}: validation document is missing keys {missing}"
            )
        validations.append(doc)
    return results, validations


def _result_row(doc: Mapping[str, Any]) -> dict[str, Any]:
    row = {key: doc[key] for key in RESULT_COLUMNS}
    # tables print u to three decimals; run documents keep full precision
    row["u_opt"] = round(row["u_opt"], 3)
    return row


def _factor(doc: Mapping[str, Any]) -> float:
    return float(doc.get("embedded_factor", 1.0))


def aggregate_tables(
    results: Iterable[Mapping[str, Any]],
    validations: Iterable[Mapping[str, Any]] = (),
) -> dict[str, pd.DataFrame]:
    """Fold run documents into the summary-table shapes.

    ``emission`` and ``cost`` hold the nominal runs (embedded factor 1).
    When any run varied the embedded rate, an ``embedded`` table collects
    all factors for the setup/workload pairs that were varied, nominal rows
    included, so the variation reads as a self-contained block.
    """
    results = list(results)
    validations = list(validations)
    tables: dict[str, pd.DataFrame] = {}

    for objective in ("emission", "cost"):
        rows = [
            _result_row(doc) for doc in results
            if doc["objective"] == objective and _factor(doc) == 1.0
        ]
        if rows:
            frame = pd.DataFrame(rows, columns=list(RESULT_COLUMNS))
            tables[objective] = frame.sort_values(
                ["setup", "workload"], kind="stable", ignore_index=True
            )

    varied_pairs = {
        (doc["setup"], doc["workload"]) for doc in results
        if doc["objective"] == "emission" and _factor(doc) != 1.0
    }
    if varied_pairs:
        rows = [
            {"embedded_factor": _factor(doc), **_result_row(doc)}
            for doc in results
            if doc["objective"] == "emission"
            and (doc["setup"], doc["workload"]) in varied_pairs
        ]
        frame = pd.DataFrame(
            rows, columns=["embedded_factor", *RESULT_COLUMNS]
        )
        tables["embedded"] = frame.sort_values(
            ["setup", "workload", "embedded_factor"],
            kind="stable", ignore_index=True,
        )

    if validations:
        rows = [
            {key: doc[key] for key in VALIDATION_COLUMNS}
            for doc in validations
        ]
        frame = pd.DataFrame(rows, columns=list(VALIDATION_COLUMNS))
        tables["validation"] = frame.sort_values(
            ["base_year", "target_year"], kind="stable", ignore_index=True
        )
    return tables


def write_tables(
    tables: Mapping[str, pd.DataFrame], out_dir: str | Path
) -> dict[str, Path]:
    """Write each aggregate table to its canonical file name."""
    out = Path(out_dir)
    written: dict[str, Path] = {}
    for name in sorted(tables):
        path = out / TABLE_FILES[name]
        tables[name].to_csv(path, index=False)
        written[name] = path
    return written
