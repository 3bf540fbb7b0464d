"""Determinism and calibration checks for the bundled dataset generator."""

from __future__ import annotations

import hashlib
import json

import pytest

from gridflex import benchmark
from gridflex.energy_data import (
    blend_intensity,
    parse_factors,
    parse_generation,
    parse_prices,
    yearly_summary,
)


def _checksums(paths):
    return {k: hashlib.sha256(p.read_bytes()).hexdigest()
            for k, p in paths.items()}


def test_generate_year_is_deterministic(tmp_path):
    first = benchmark.generate_year(2010, tmp_path / "a")
    second = benchmark.generate_year(2010, tmp_path / "b")
    assert set(first) == {"generation", "prices", "factors"}
    assert _checksums(first) == _checksums(second)


def test_default_years_cover_the_study_window():
    assert benchmark.DEFAULT_YEARS == tuple(range(2002, 2026))


def test_uncalibrated_year_is_rejected(tmp_path):
    with pytest.raises(ValueError, match="2001"):
        benchmark.generate_year(2001, tmp_path)


def test_manifest_checksums_match_files(data_dir):
    manifest = json.loads((data_dir / "manifest.json").read_text())
    years = manifest["years"]
    assert set(years) == {str(y) for y in benchmark.DEFAULT_YEARS}
    spot = ["2002", "2013", "2024"]
    for year in spot:
        for kind, entry in years[year].items():
            path = data_dir / entry["file"]
            assert path.exists(), f"{year} {kind} missing"
            digest = hashlib.sha256(path.read_bytes()).hexdigest()
            assert digest == entry["sha256"], f"{year} {kind} checksum"


def _load_year(data_dir, year):
    records = parse_generation(data_dir / f"generation_{year}.csv")
    prices = parse_prices(data_dir / f"prices_{year}.csv")
    factors = parse_factors(data_dir / f"factors_{year}.csv", year)
    return records, blend_intensity(records, {year: factors}, prices)


def test_resolution_switches_in_2023(data_dir):
    _, coarse = _load_year(data_dir, 2022)
    _, fine = _load_year(data_dir, 2024)
    assert len(coarse.intensity) == 8760
    assert float(coarse.duration_h[0]) == 1.0
    assert len(fine.intensity) == 35136  # leap year of quarter hours
    assert float(fine.duration_h[0]) == 0.25


def test_generated_shares_match_calibration(data_dir):
    cfg = benchmark.default_config()
    for year in (2003, 2015, 2024):
        records, series = _load_year(data_dir, year)
        summary = yearly_summary({year: series}, {year: records})
        row = summary.rows[0]
        assert row.renewable_share_percent == pytest.approx(
            cfg.renewable_share_percent[year], abs=0.01)
        assert row.mean_intensity_kg_per_mwh == pytest.approx(
            cfg.mean_intensity[year], rel=0.02)


def test_recent_year_has_negative_price_hours(data_dir):
    _, series = _load_year(data_dir, 2024)
    frac = float((series.price < 0.0).mean())
    assert 0.02 <= frac <= 0.09
