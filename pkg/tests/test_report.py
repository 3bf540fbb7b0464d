"""Run documents, aggregate tables, provenance stability."""

from __future__ import annotations

import json

import numpy as np
import pytest

from gridflex.cluster_model import ClusterSetup, WorkloadScenario
from gridflex.dispatch import optimise, policy_from_utilisation
from gridflex.energy_data import DataFormatError
from gridflex.report import (
    RESULT_COLUMNS,
    aggregate_tables,
    collect_run_documents,
    curve_frame,
    provenance_block,
    result_payload,
    schedule_frame,
    write_json,
    write_tables,
)

MIXED = WorkloadScenario(name="mixed", modes=((0.0, 0.3), (1.0, 0.7)))


def _setup(name="t", embedded=1.8e-4):
    return ClusterSetup(name=name, n_cores=16, p_max_w=7.6, p_idle_w=1.1,
                        e_embedded_kg_per_core_hour=embedded)


def _series(make_series, seed=137, n=200):
    rng = np.random.default_rng(seed)
    values = 420.0 + 180.0 * np.sin(np.arange(n) / 9.0) \
        + rng.normal(0, 40, n)
    return make_series(np.clip(values, 1.0, None))


# ---------------------------------------------------------------------------
# frames
# ---------------------------------------------------------------------------


def test_curve_frame_reproduces_the_summary_numbers(make_series):
    series = _series(make_series)
    setup = _setup()
    result = optimise(series, setup, MIXED)
    frame = curve_frame(result, setup)
    assert list(frame.columns) == [
        "u", "X", "embedded", "operation", "idle", "total",
        "n_cores_scaled", "is_optimum",
    ]
    assert frame["is_optimum"].sum() == 1
    marked = frame[frame["is_optimum"] == 1].iloc[0]
    assert marked["u"] == result.u_opt
    assert marked["total"] == pytest.approx(result.breakdown.total)
    last_total = frame["total"].iloc[-1]
    assert marked["total"] / last_total == pytest.approx(
        result.relative_objective, rel=1e-12)
    np.testing.assert_allclose(
        frame["n_cores_scaled"], setup.n_cores / frame["u"])


def test_curve_frame_rejects_a_foreign_setup(make_series):
    series = _series(make_series)
    result = optimise(series, _setup(), MIXED)
    other = ClusterSetup(name="other", n_cores=64, p_max_w=7.6,
                         p_idle_w=1.1, e_embedded_kg_per_core_hour=1.8e-4)
    with pytest.raises(ValueError, match="does not match"):
        curve_frame(result, other)


def test_schedule_frame_marks_run_intervals(make_series):
    series = make_series([100.0, 300.0, 200.0, 400.0])
    policy = policy_from_utilisation(series, 0.5)
    frame = schedule_frame(series, policy)
    assert list(frame["run"]) == [1, 0, 1, 0]
    assert frame["start_utc"].iloc[0] == "2024-01-01T00:00:00+00:00"
    short = policy_from_utilisation(make_series([1.0, 2.0]), 1.0)
    with pytest.raises(ValueError, match="intervals"):
        schedule_frame(series, short)


# ---------------------------------------------------------------------------
# provenance / json
# ---------------------------------------------------------------------------


def test_provenance_changes_iff_an_input_changes(tmp_path):
    f = tmp_path / "a.csv"
    f.write_text("x\n1\n")
    first = provenance_block({"generation": f})
    again = provenance_block({"generation": f})
    assert first == again
    f.write_text("x\n2\n")
    assert provenance_block({"generation": f}) != first


def test_write_json_is_byte_stable(tmp_path):
    payload = {"b": 2, "a": [1.5, None], "nested": {"z": "s", "y": 1}}
    p1 = write_json(payload, tmp_path / "one.json")
    p2 = write_json(payload, tmp_path / "two.json")
    assert p1.read_bytes() == p2.read_bytes()
    assert p1.read_bytes().endswith(b"\n")
    with pytest.raises(ValueError):
        write_json({"bad": float("nan")}, tmp_path / "nan.json")


# ---------------------------------------------------------------------------
# run documents and aggregation
# ---------------------------------------------------------------------------


def _write_result(make_series, out, *, name="t", embedded_factor=1.0,
                  objective="emission", seed=137):
    series = _series(make_series, seed=seed)
    setup = _setup(name=name)
    if embedded_factor != 1.0:
        run_setup = setup.with_embedded_rate(
            embedded_factor * setup.e_embedded_kg_per_core_hour)
    else:
        run_setup = setup
    result = optimise(series, run_setup, MIXED, objective)
    doc = result_payload(setup, MIXED, result,
                         embedded_factor=embedded_factor, series=series)
    out.mkdir(parents=True, exist_ok=True)
    write_json(doc, out / "result.json")
    return doc


def test_result_payload_threshold_null_iff_always_on(make_series):
    series = make_series(np.full(20, 300.0))
    setup = _setup()
    result = optimise(series, setup, MIXED)
    doc = result_payload(setup, MIXED, result)
    assert result.u_opt == 1.0
    assert doc["threshold"] is None


def test_collect_and_aggregate_roundtrip(make_series, tmp_path):
    _write_result(make_series, tmp_path / "r1", name="alpha")
    _write_result(make_series, tmp_path / "r2", name="beta", seed=139)
    _write_result(make_series, tmp_path / "r3", name="alpha",
                  embedded_factor=0.5)
    results, validations = collect_run_documents(tmp_path)
    assert len(results) == 3 and validations == []
    tables = aggregate_tables(results)
    emission = tables["emission"]
    assert list(emission.columns) == list(RESULT_COLUMNS)
    assert list(emission["setup"]) == ["alpha", "beta"]
    # u rounds to table precision, full precision stays in the documents
    assert emission["u_opt"].iloc[0] == round(results[0]["u_opt"], 3)
    embedded = tables["embedded"]
    assert list(embedded["embedded_factor"]) == [0.5, 1.0]
    assert set(embedded["setup"]) == {"alpha"}
    assert "cost" not in tables
    written = write_tables(tables, tmp_path)
    assert sorted(p.name for p in written.values()) == [
        "embedded_table.csv", "emission_table.csv",
    ]


def test_collect_rejects_missing_keys(tmp_path):
    run = tmp_path / "runs" / "bad"
    run.mkdir(parents=True)
    write_json({"objective": "emission", "setup": "x"},
               run / "result.json")
    with pytest.raises(DataFormatError, match="missing keys"):
        collect_run_documents(tmp_path)


def test_collect_rejects_inconsistent_threshold(tmp_path):
    run = tmp_path / "runs" / "bad"
    run.mkdir(parents=True)
    write_json({
        "objective": "emission", "setup": "x", "workload": "y",
        "u_opt": 1.0, "threshold": 120.0, "relative_objective": 1.0,
    }, run / "result.json")
    with pytest.raises(DataFormatError, match="threshold"):
        collect_run_documents(tmp_path)


def test_collect_rejects_invalid_json(tmp_path):
    run = tmp_path / "runs" / "bad"
    run.mkdir(parents=True)
    (run / "result.json").write_text("{not json", encoding="utf-8")
    with pytest.raises(DataFormatError, match="not valid JSON"):
        collect_run_documents(tmp_path)


def test_documents_round_trip_through_disk(make_series, tmp_path):
    doc = _write_result(make_series, tmp_path / "only")
    loaded = json.loads((tmp_path / "only" / "result.json").read_text())
    assert loaded["u_opt"] == doc["u_opt"]
    assert loaded["breakdown"] == doc["breakdown"]
    assert loaded["pause_count"] == doc["pause_count"]
