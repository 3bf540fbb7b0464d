"""End-to-end command line runs against the bundled generator's files."""

from __future__ import annotations

import json
import subprocess
import sys

import pytest

import gridflex.cli
from gridflex.benchmark import default_config
from gridflex.cli import main
from gridflex.dispatch import InvariantViolation


@pytest.fixture(scope="module")
def raw_2003(data_dir):
    return {
        "generation": data_dir / "generation_2003.csv",
        "prices": data_dir / "prices_2003.csv",
        "factors": data_dir / "factors_2003.csv",
    }


@pytest.fixture(scope="module")
def intervals_2003(raw_2003, tmp_path_factory):
    out = tmp_path_factory.mktemp("cli_ingest")
    code = main([
        "--out", str(out), "--quiet", "ingest",
        "--generation", str(raw_2003["generation"]),
        "--prices", str(raw_2003["prices"]),
        "--factors", str(raw_2003["factors"]),
    ])
    assert code == 0
    return out / "intervals.csv"


def _shares_csv(path, years):
    cfg = default_config()
    lines = ["year,renewable_share_percent,mean_intensity_kg_per_mwh"]
    lines += [
        f"{y},{cfg.renewable_share_percent[y]},{cfg.mean_intensity[y]}"
        for y in years
    ]
    path.write_text("\n".join(lines) + "\n")
    return path


def test_ingest_writes_series_and_metadata(intervals_2003):
    assert intervals_2003.exists()
    meta = json.loads(
        intervals_2003.with_suffix(".meta.json").read_text())
    assert meta["year"] == 2003
    assert meta["intervals"] == 8760
    assert set(meta["provenance"]["inputs"]) == {
        "generation", "prices", "factors",
    }


def test_ingest_capture_is_quiet(raw_2003, tmp_path, capsys):
    code = main([
        "--out", str(tmp_path), "--quiet", "ingest",
        "--generation", str(raw_2003["generation"]),
        "--prices", str(raw_2003["prices"]),
        "--factors", str(raw_2003["factors"]),
    ])
    assert code == 0
    assert capsys.readouterr().out == ""


def test_missing_input_fails_without_partial_output(raw_2003, tmp_path,
                                                    capsys):
    code = main([
        "--out", str(tmp_path), "ingest",
        "--generation", str(raw_2003["generation"]),
        "--prices", str(raw_2003["prices"]),
        "--factors", str(tmp_path / "nowhere.csv"),
    ])
    assert code == 2
    assert "gridflex:" in capsys.readouterr().err
    assert not (tmp_path / "intervals.csv").exists()


def test_unknown_setup_is_an_input_error(intervals_2003, tmp_path, capsys):
    code = main([
        "--out", str(tmp_path), "optimize",
        "--data", str(intervals_2003),
        "--setup", "warehouse13", "--workload", "backfilling",
    ])
    assert code == 2
    assert "unknown setup" in capsys.readouterr().err


def test_partial_year_needs_explicit_consent(raw_2003, tmp_path, capsys):
    import pandas as pd
    gen = pd.read_csv(raw_2003["generation"])
    stamps = pd.to_datetime(gen["start_utc"])
    keep = stamps.dt.month <= 10
    clipped = tmp_path / "gen_clipped.csv"
    gen[keep].to_csv(clipped, index=False)
    prices = pd.read_csv(raw_2003["prices"])
    prices[keep].to_csv(tmp_path / "prices_clipped.csv", index=False)
    argv = [
        "--out", str(tmp_path), "ingest",
        "--generation", str(clipped),
        "--prices", str(tmp_path / "prices_clipped.csv"),
        "--factors", str(raw_2003["factors"]),
    ]
    assert main(argv) == 3
    assert "allow-partial" in capsys.readouterr().err
    assert main(argv + ["--allow-partial"]) == 0


def test_invariant_violation_exits_4(intervals_2003, tmp_path, capsys,
                                     monkeypatch):
    def boom(*_a, **_k):
        raise InvariantViolation("relative objective above 1")
    monkeypatch.setattr(gridflex.cli, "optimise", boom)
    code = main([
        "--out", str(tmp_path), "optimize",
        "--data", str(intervals_2003),
        "--setup", "baf_modern", "--workload", "backfilling",
    ])
    assert code == 4
    assert "relative objective" in capsys.readouterr().err


def test_optimize_report_roundtrip_and_determinism(intervals_2003,
                                                   tmp_path):
    argv = [
        "--out", str(tmp_path), "--quiet", "optimize",
        "--data", str(intervals_2003),
        "--setup", "baf_modern", "--workload", "backfilling",
    ]
    assert main(argv) == 0
    run = tmp_path / "emission_baf_modern_backfilling"
    result = run / "result.json"
    curve = run / "curve.csv"
    schedule = run / "schedule.csv"
    assert result.exists() and curve.exists() and schedule.exists()
    first = result.read_bytes()
    assert main(argv) == 0
    assert result.read_bytes() == first

    doc = json.loads(first)
    assert doc["objective"] == "emission"
    assert 0 < doc["u_opt"] <= 1
    assert doc["relative_objective"] <= 1.0

    assert main(["--out", str(tmp_path), "--quiet", "report"]) == 0
    table = (tmp_path / "emission_table.csv").read_text().splitlines()
    assert table[0] == "setup,workload,u_opt,threshold,relative_objective"
    assert len(table) == 2
    assert table[1].startswith("baf_modern,backfilling,")


def test_cost_objective_uses_config_tariff(intervals_2003, tmp_path):
    cfg = tmp_path / "site.toml"
    cfg.write_text("[tariff]\nc_yearly_demand_eur_per_kw = 80.0\n")
    code = main([
        "--config", str(cfg), "--out", str(tmp_path), "--quiet",
        "optimize", "--data", str(intervals_2003),
        "--setup", "baf_default", "--workload", "heavy",
        "--objective", "cost", "--label", "cost_run",
    ])
    assert code == 0
    doc = json.loads((tmp_path / "cost_run" / "result.json").read_text())
    assert doc["objective"] == "cost"
    assert doc["breakdown"]["demand"] > 0


def test_sweep_writes_curve_table(intervals_2003, tmp_path):
    code = main([
        "--out", str(tmp_path), "--quiet", "sweep",
        "--data", str(intervals_2003),
        "--setup", "baf_modern", "--workload", "backfilling",
        "--steps", "5", "--label", "sweep_run",
    ])
    assert code == 0
    lines = (tmp_path / "sweep_run" / "sweep.csv").read_text().splitlines()
    assert lines[0].startswith("idle_ratio,")
    assert len(lines) == 6


def test_validate_roundtrip(data_dir, tmp_path):
    shares = _shares_csv(tmp_path / "shares.csv", range(2002, 2006))
    ingest_dir = tmp_path / "ingested"
    for year in (2003, 2005):
        code = main([
            "--out", str(ingest_dir), "--quiet", "ingest",
            "--generation", str(data_dir / f"generation_{year}.csv"),
            "--prices", str(data_dir / f"prices_{year}.csv"),
            "--factors", str(data_dir / f"factors_{year}.csv"),
            "--name", f"intervals_{year}.csv",
        ])
        assert code == 0
    code = main([
        "--out", str(tmp_path), "--quiet", "validate",
        "--base", str(ingest_dir / "intervals_2003.csv"),
        "--target", str(ingest_dir / "intervals_2005.csv"),
        "--shares", str(shares),
        "--base-year", "2003", "--target-year", "2005",
        "--setup", "baf_modern", "--workload", "backfilling",
    ])
    assert code == 0
    doc = json.loads(
        (tmp_path / "validate_2003_2005_baf_modern_backfilling"
         / "validation.json").read_text())
    assert doc["base_year"] == 2003 and doc["target_year"] == 2005
    assert doc["threshold_deviation_percent"] >= 0.0

    assert main(["--out", str(tmp_path), "--quiet", "report"]) == 0
    table = (tmp_path / "validation_table.csv").read_text().splitlines()
    assert len(table) == 2


def test_compare_freq_payload(intervals_2003, tmp_path):
    code = main([
        "--out", str(tmp_path), "--quiet", "compare-freq",
        "--data", str(intervals_2003),
        "--setup", "baf_modern", "--workload", "backfilling",
        "--optimise-limited", "--label", "freq_run",
    ])
    assert code == 0
    doc = json.loads(
        (tmp_path / "freq_run" / "freq_compare.json").read_text())
    assert doc["ratio"] == pytest.approx(
        doc["limited_total"] / doc["nominal_total"])
    assert "combined_ratio" in doc and "combined_u" in doc


def test_fetch_writes_raw_files(tmp_path):
    code = main([
        "--out", str(tmp_path), "--quiet", "fetch", "--year", "2004",
    ])
    assert code == 0
    for kind in ("generation", "prices", "factors"):
        assert (tmp_path / f"{kind}_2004.csv").exists()
    assert (tmp_path / "manifest.json").exists()


def test_report_with_nothing_to_aggregate(tmp_path, capsys):
    assert main(["--out", str(tmp_path), "report"]) == 2
    assert "no result.json" in capsys.readouterr().err


def test_console_entry_point_reports_version():
    proc = subprocess.run(
        [sys.executable, "-m", "gridflex.cli", "--version"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("gridflex ")
