"""Ingestion of public electricity data into a validated interval series.

The raw inputs are net generation broken down by type (15-minute or hourly
resolution), day-ahead spot prices on the same grid, and one emission-factor
file per calendar year mapping each generation type to kg CO2 per MWh. The
blend of an interval is the generation-weighted mean factor,

    intensity_i = sum_g(gen_gi * ef_g) / sum_g(gen_gi),

taken over the non-negative generation terms only: storage charging shows up
as negative generation and is consumption, not production, so it contributes
to neither sum. The result of ingestion is an IntervalSeries carrying, per
interval, the start time, duration, blended carbon intensity and spot price.
Downstream modules only ever see this canonical form.

Timestamps must carry an explicit UTC offset. Gaps shorter than one hour are
filled by linear interpolation of intensity and price; longer gaps abort the
ingest, because inventing hours of data would silently bias every objective
built on the series.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Mapping

import numpy as np
import pandas as pd


class DataFormatError(ValueError):
    """Raised for malformed input files (bad rows, timestamps, columns)."""


class DataQualityError(ValueError):
    """Raised for well-formed but unusable data (gaps, degenerate values)."""


#: Source names (normalised) whose negative generation marks storage charging.
STORAGE_SOURCES = frozenset({
    "pumped_storage", "battery_storage", "storage",
})

#: Source names counted as renewable for the yearly share.
RENEWABLE_SOURCES = frozenset({
    "solar", "wind_onshore", "wind_offshore", "wind", "hydro",
    "hydro_run_of_river", "biomass", "geothermal",
})


def normalise_source(name: str) -> str:
    """Canonical lowercase source key: trimmed, spaces and dashes to '_'."""
    return "_".join(name.strip().lower().replace("-", " ").split())


def is_storage_source(name: str) -> bool:
    return normalise_source(name) in STORAGE_SOURCES


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class GenerationRecord:
    """Net generation of one interval, broken down by source, in MWh."""

    start_utc: np.datetime64
    duration_h: float
    per_source_mwh: dict[str, float]

    def __post_init__(self) -> None:
        if not self.duration_h > 0.0:
            raise DataFormatError(
                f"interval at {self.start_utc} has duration {self.duration_h}"
            )
        for src, val in self.per_source_mwh.items():
            if not np.isfinite(val):
                raise DataFormatError(
                    f"non-finite generation for {src!r} at {self.start_utc}"
                )
            if val < 0.0 and not is_storage_source(src):
                raise DataFormatError(
                    f"negative generation for non-storage source {src!r} "
                    f"at {self.start_utc}"
                )


@dataclass(frozen=True)
class EmissionFactorTable:
    """Per-source emission factors (kg CO2 per MWh) of one calendar year."""

    year: int
    per_source_factor: dict[str, float]

    def __post_init__(self) -> None:
        for src, val in self.per_source_factor.items():
            if not np.isfinite(val) or val < 0.0:
                raise DataFormatError(
                    f"emission factor for {src!r} must be finite and >= 0, "
                    f"got {val}"
                )

    def factor(self, source: str) -> float:
        key = normalise_source(source)
        try:
            return self.per_source_factor[key]
        except KeyError:
            raise DataQualityError(
                f"no emission factor for source {source!r} in the "
                f"{self.year} table"
            ) from None


@dataclass(frozen=True, slots=True)
class PriceRecord:
    """Spot price of one interval in EUR/MWh. Negative prices are real."""

    start_utc: np.datetime64
    duration_h: float
    price_eur_per_mwh: float

    def __post_init__(self) -> None:
        if not self.duration_h > 0.0:
            raise DataFormatError(
                f"price interval at {self.start_utc} has duration "
                f"{self.duration_h}"
            )
        if not np.isfinite(self.price_eur_per_mwh):
            raise DataFormatError(f"non-finite price at {self.start_utc}")


@dataclass(frozen=True)
class IntervalSeries:
    """Validated, gap-free series of intervals with intensity and price.

    Arrays are parallel and ordered by start time. ``start_utc`` is
    datetime64[s] in UTC, ``duration_h`` in hours, ``intensity`` in
    kg CO2 per MWh, ``price`` in EUR/MWh.
    """

    start_utc: np.ndarray
    duration_h: np.ndarray
    intensity: np.ndarray
    price: np.ndarray

    def __post_init__(self) -> None:
        n = len(self.start_utc)
        if n == 0:
            raise DataQualityError("empty interval series")
        if not (len(self.duration_h) == len(self.intensity) == len(self.price) == n):
            raise DataFormatError("interval series arrays differ in length")
        starts_s = self.start_utc.astype("datetime64[s]").astype(np.int64)
        if np.any(np.diff(starts_s) <= 0):
            raise DataFormatError("interval start times must strictly increase")
        ends_s = starts_s + np.round(self.duration_h * 3600.0).astype(np.int64)
        if np.any(starts_s[1:] < ends_s[:-1]):
            raise DataFormatError("intervals overlap")
        if np.any(~np.isfinite(self.duration_h)) or np.any(self.duration_h <= 0):
            raise DataFormatError("durations must be positive and finite")
        if np.any(~np.isfinite(self.intensity)) or np.any(self.intensity < 0):
            raise DataQualityError("intensities must be finite and >= 0")
        if np.any(~np.isfinite(self.price)):
            raise DataQualityError("prices must be finite")

    def __len__(self) -> int:
        return len(self.start_utc)

    @property
    def t_total(self) -> float:
        """Total covered time in hours."""
        return float(np.sum(self.duration_h))

    def metric(self, name: str) -> np.ndarray:
        """Per-interval dispatch metric: 'intensity' or 'price'."""
        if name == "intensity":
            return self.intensity
        if name == "price":
            return self.price
        raise ValueError(f"unknown metric {name!r}")

    def to_csv(self, path: str | Path) -> None:
        """Write the canonical on-disk form (exact float round-trip)."""
        stamps = np.datetime_as_string(
            self.start_utc.astype("datetime64[s]"), unit="s", timezone="UTC"
        )
        df = pd.DataFrame({
            "start_utc": [s.replace("Z", "+00:00") for s in stamps],
            "duration_h": self.duration_h,
            "intensity_kg_per_mwh": self.intensity,
            "price_eur_per_mwh": self.price,
        })
        df.to_csv(path, index=False)

    @classmethod
    def from_csv(cls, path: str | Path) -> "IntervalSeries":
        try:
            # the default float parser can be one ulp off; round_trip keeps
            # the to_csv promise of exact values
            df = pd.read_csv(path, float_precision="round_trip")
        except FileNotFoundError:
            raise
        except Exception as exc:
            raise DataFormatError(f"cannot read interval CSV {path}: {exc}") from exc
        required = [
            "start_utc", "duration_h",
            "intensity_kg_per_mwh", "price_eur_per_mwh",
        ]
        missing = [c for c in required if c not in df.columns]
        if missing:
            raise DataFormatError(
                f"interval CSV {path} is missing columns {missing}"
            )
        starts = _parse_timestamps(df["start_utc"], str(path))
        return cls(
            start_utc=starts,
            duration_h=df["duration_h"].to_numpy(dtype=np.float64),
            intensity=df["intensity_kg_per_mwh"].to_numpy(dtype=np.float64),
            price=df["price_eur_per_mwh"].to_numpy(dtype=np.float64),
        )


@dataclass(frozen=True)
class ShareRow:
    year: int
    renewable_share_percent: float
    mean_intensity_kg_per_mwh: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.renewable_share_percent <= 100.0:
            raise DataQualityError(
                f"renewable share for {self.year} outside [0, 100]: "
                f"{self.renewable_share_percent}"
            )


@dataclass(frozen=True)
class RenewableShareTable:
    """Yearly renewable share and mean intensity, ordered by year."""

    rows: tuple[ShareRow, ...]

    def __post_init__(self) -> None:
        years = [r.year for r in self.rows]
        if years != sorted(years):
            raise DataFormatError("share table years must be sorted")
        for a, b in zip(years, years[1:]):
            if b != a + 1:
                raise DataQualityError(
                    f"share table years must be contiguous, gap between "
                    f"{a} and {b}"
                )

    def __len__(self) -> int:
        return len(self.rows)

    def share(self, year: int) -> float:
        for r in self.rows:
            if r.year == year:
                return r.renewable_share_percent
        raise KeyError(f"no share entry for year {year}")

    def to_csv(self, path: str | Path) -> None:
        pd.DataFrame({
            "year": [r.year for r in self.rows],
            "renewable_share_percent": [
                r.renewable_share_percent for r in self.rows
            ],
            "mean_intensity_kg_per_mwh": [
                r.mean_intensity_kg_per_mwh for r in self.rows
            ],
        }).to_csv(path, index=False)

    @classmethod
    def from_csv(cls, path: str | Path) -> "RenewableShareTable":
        df = pd.read_csv(path, float_precision="round_trip")
        required = [
            "year", "renewable_share_percent", "mean_intensity_kg_per_mwh",
        ]
        missing = [c for c in required if c not in df.columns]
        if missing:
            raise DataFormatError(f"share CSV {path} is missing {missing}")
        return cls(rows=tuple(
            ShareRow(
                year=int(r.year),
                renewable_share_percent=float(r.renewable_share_percent),
                mean_intensity_kg_per_mwh=float(r.mean_intensity_kg_per_mwh),
            )
            for r in df.itertuples()
        ))


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def _parse_timestamps(col: pd.Series, origin: str) -> np.ndarray:
    """ISO-8601 timestamps with a mandatory UTC offset -> datetime64[s] UTC.

    The offset is checked before parsing: pandas would silently localise
    naive stamps once asked for UTC output, and a file mixing offsets (a DST
    transition day) must still parse cleanly.
    """
    raw = col.astype(str).str.strip()
    has_offset = raw.str.contains(r"(?:Z|[+-]\d{2}(?::?\d{2})?)$", regex=True)
    if not bool(has_offset.all()):
        bad = int(np.flatnonzero(~has_offset.to_numpy())[0])
        raise DataFormatError(
            f"{origin}: timestamp without UTC offset in row {bad}: "
            f"{raw.iloc[bad]!r}"
        )
    try:
        utc = pd.to_datetime(raw, errors="raise", utc=True, format="ISO8601")
    except (ValueError, TypeError) as exc:
        raise DataFormatError(f"{origin}: unparseable timestamp: {exc}") from exc
    return utc.dt.tz_localize(None).to_numpy().astype("datetime64[s]")


def _numeric_column(df: pd.DataFrame, name: str, origin: str) -> np.ndarray:
    vals = pd.to_numeric(df[name], errors="coerce")
    bad = np.flatnonzero(vals.isna().to_numpy())
    if bad.size:
        raise DataFormatError(
            f"{origin}: malformed value in column {name!r}, data row "
            f"{int(bad[0])}: {df[name].iloc[int(bad[0])]!r}"
        )
    return vals.to_numpy(dtype=np.float64)


def _check_duplicates(starts: np.ndarray, origin: str) -> None:
    uniq, counts = np.unique(starts, return_counts=True)
    if np.any(counts > 1):
        dup = uniq[counts > 1][0]
        raise DataFormatError(f"{origin}: duplicate timestamp {dup}")


def parse_generation(
    source: str | Path | IO[str], format: str = "csv"
) -> list[GenerationRecord]:
    """Read a generation-by-type file into sorted, validated records.

    CSV layout: ``start_utc,duration_h,<source>,...`` with one column per
    generation type in MWh. JSON layout: a list of objects with keys
    ``start_utc``, ``duration_h`` and ``generation_mwh`` (a source->MWh map).
    """
    origin = str(source) if isinstance(source, (str, Path)) else "<stream>"
    if format == "csv":
        try:
            df = pd.read_csv(source, dtype=str)
        except FileNotFoundError:
            raise
        except Exception as exc:
            raise DataFormatError(f"{origin}: cannot read CSV: {exc}") from exc
        if "start_utc" not in df.columns or "duration_h" not in df.columns:
            raise DataFormatError(
                f"{origin}: generation CSV needs 'start_utc' and 'duration_h' "
                f"columns, got {list(df.columns)}"
            )
        src_cols = [c for c in df.columns if c not in ("start_utc", "duration_h")]
        if not src_cols:
            raise DataFormatError(f"{origin}: no generation source columns")
        starts = _parse_timestamps(df["start_utc"], origin)
        durations = _numeric_column(df, "duration_h", origin)
        per_source = {
            normalise_source(c): _numeric_column(df, c, origin) for c in src_cols
        }
        if len(per_source) != len(src_cols):
            raise DataFormatError(
                f"{origin}: source columns collide after normalisation: "
                f"{src_cols}"
            )
    elif format == "json":
        if isinstance(source, (str, Path)):
            payload = json.loads(Path(source).read_text(encoding="utf-8"))
        else:
            payload = json.load(source)
        if not isinstance(payload, list) or not payload:
            raise DataFormatError(f"{origin}: JSON must be a non-empty list")
        try:
            stamps = pd.Series([row["start_utc"] for row in payload])
            durations = np.array(
                [float(row["duration_h"]) for row in payload], dtype=np.float64
            )
            maps = [row["generation_mwh"] for row in payload]
        except (KeyError, TypeError, ValueError) as exc:
            raise DataFormatError(f"{origin}: malformed JSON row: {exc}") from exc
        starts = _parse_timestamps(stamps, origin)
        sources = sorted({normalise_source(s) for m in maps for s in m})
        per_source = {
            s: np.array(
                [
                    float(m.get(s, _lookup_raw(m, s, origin)))
                    for m in maps
                ],
                dtype=np.float64,
            )
            for s in sources
        }
    else:
        raise ValueError(f"unknown generation format {format!r}")

    _check_duplicates(starts, origin)
    order = np.argsort(starts, kind="stable")
    records = []
    for i in order:
        records.append(
            GenerationRecord(
                start_utc=starts[i],
                duration_h=float(durations[i]),
                per_source_mwh={s: float(v[i]) for s, v in per_source.items()},
            )
        )
    return records


def _lookup_raw(mapping: dict, normalised: str, origin: str) -> float:
    # JSON keys may be un-normalised; fall back to a scan before giving up.
    for k, v in mapping.items():
        if normalise_source(k) == normalised:
            return float(v)
    return 0.0


def parse_prices(
    source: str | Path | IO[str], format: str = "csv"
) -> list[PriceRecord]:
    """Read a spot-price file (``start_utc,duration_h,price_eur_per_mwh``)."""
    origin = str(source) if isinstance(source, (str, Path)) else "<stream>"
    if format == "csv":
        try:
            df = pd.read_csv(source, dtype=str)
        except FileNotFoundError:
            raise
        except Exception as exc:
            raise DataFormatError(f"{origin}: cannot read CSV: {exc}") from exc
        required = ["start_utc", "duration_h", "price_eur_per_mwh"]
        missing = [c for c in required if c not in df.columns]
        if missing:
            raise DataFormatError(f"{origin}: price CSV is missing {missing}")
        starts = _parse_timestamps(df["start_utc"], origin)
        durations = _numeric_column(df, "duration_h", origin)
        prices = _numeric_column(df, "price_eur_per_mwh", origin)
    elif format == "json":
        if isinstance(source, (str, Path)):
            payload = json.loads(Path(source).read_text(encoding="utf-8"))
        else:
            payload = json.load(source)
        if not isinstance(payload, list) or not payload:
            raise DataFormatError(f"{origin}: JSON must be a non-empty list")
        try:
            starts = _parse_timestamps(
                pd.Series([row["start_utc"] for row in payload]), origin
            )
            durations = np.array(
                [float(row["duration_h"]) for row in payload], dtype=np.float64
            )
            prices = np.array(
                [float(row["price_eur_per_mwh"]) for row in payload],
                dtype=np.float64,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DataFormatError(f"{origin}: malformed JSON row: {exc}") from exc
    else:
        raise ValueError(f"unknown price format {format!r}")

    _check_duplicates(starts, origin)
    order = np.argsort(starts, kind="stable")
    return [
        PriceRecord(
            start_utc=starts[i],
            duration_h=float(durations[i]),
            price_eur_per_mwh=float(prices[i]),
        )
        for i in order
    ]


def parse_factors(source: str | Path | IO[str], year: int) -> EmissionFactorTable:
    """Read a per-year emission factor file (``source,kg_per_mwh``)."""
    origin = str(source) if isinstance(source, (str, Path)) else "<stream>"
    try:
        df = pd.read_csv(source, dtype=str)
    except FileNotFoundError:
        raise
    except Exception as exc:
        raise DataFormatError(f"{origin}: cannot read CSV: {exc}") from exc
    if "source" not in df.columns or "kg_per_mwh" not in df.columns:
        raise DataFormatError(
            f"{origin}: factor CSV needs 'source' and 'kg_per_mwh' columns"
        )
    values = _numeric_column(df, "kg_per_mwh", origin)
    table: dict[str, float] = {}
    for i, raw_name in enumerate(df["source"]):
        key = normalise_source(str(raw_name))
        if key in table:
            raise DataFormatError(f"{origin}: duplicate source {key!r}")
        table[key] = float(values[i])
    return EmissionFactorTable(year=year, per_source_factor=table)


# ---------------------------------------------------------------------------
# Blending and gap handling
# ---------------------------------------------------------------------------

#: Gaps of at least this many hours abort ingestion instead of being filled.
MAX_FILLABLE_GAP_H = 1.0


def blend_intensity(
    records: Iterable[GenerationRecord],
    factors: EmissionFactorTable | Mapping[int, EmissionFactorTable],
    prices: Iterable[PriceRecord],
) -> IntervalSeries:
    """Blend generation into per-interval carbon intensity, paired with prices.

    Every generation record must have a price record with identical start and
    duration. Factors may be a single table or a year->table mapping; the
    table of the interval's calendar year applies.
    """
    recs = sorted(records, key=lambda r: r.start_utc)
    if not recs:
        raise DataQualityError("no generation records to blend")
    price_by_start: dict[np.datetime64, PriceRecord] = {}
    for p in prices:
        price_by_start[p.start_utc] = p

    unmatched = [
        str(r.start_utc) for r in recs
        if r.start_utc not in price_by_start
        or abs(price_by_start[r.start_utc].duration_h - r.duration_h) > 1e-9
    ]
    if unmatched:
        shown = ", ".join(unmatched[:5])
        more = f" (+{len(unmatched) - 5} more)" if len(unmatched) > 5 else ""
        raise DataQualityError(
            f"{len(unmatched)} generation interval(s) without a matching "
            f"price interval: {shown}{more}"
        )

    def table_for(ts: np.datetime64) -> EmissionFactorTable:
        if isinstance(factors, EmissionFactorTable):
            return factors
        year = int(str(ts.astype("datetime64[Y]")))
        try:
            return factors[year]
        except KeyError:
            raise DataQualityError(
                f"no emission factor table for year {year}"
            ) from None

    n = len(recs)
    starts = np.empty(n, dtype="datetime64[s]")
    durations = np.empty(n, dtype=np.float64)
    intensity = np.empty(n, dtype=np.float64)
    price = np.empty(n, dtype=np.float64)
    for i, rec in enumerate(recs):
        tab = table_for(rec.start_utc)
        num = 0.0
        den = 0.0
        for src, gen in rec.per_source_mwh.items():
            if gen < 0.0:
                continue  # storage charging: consumption, not generation
            num += gen * tab.factor(src)
            den += gen
        if den <= 0.0:
            raise DataQualityError(
                f"interval at {rec.start_utc} has zero total generation"
            )
        starts[i] = rec.start_utc
        durations[i] = rec.duration_h
        intensity[i] = num / den
        price[i] = price_by_start[rec.start_utc].price_eur_per_mwh

    starts, durations, intensity, price = _fill_gaps(
        starts, durations, intensity, price
    )
    return IntervalSeries(
        start_utc=starts, duration_h=durations, intensity=intensity, price=price
    )


def _fill_gaps(
    starts: np.ndarray,
    durations: np.ndarray,
    intensity: np.ndarray,
    price: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Fill sub-hour gaps by time-linear interpolation; abort on longer ones."""
    starts_s = starts.astype(np.int64)
    ends_s = starts_s + np.round(durations * 3600.0).astype(np.int64)
    gap_h = (starts_s[1:] - ends_s[:-1]) / 3600.0
    gap_idx = np.flatnonzero(gap_h > 1e-12)
    if gap_idx.size == 0:
        return starts, durations, intensity, price

    too_long = gap_idx[gap_h[gap_idx] >= MAX_FILLABLE_GAP_H - 1e-12]
    if too_long.size:
        i = int(too_long[0])
        raise DataQualityError(
            f"gap of {gap_h[i]:.2f} h after {starts[i]} exceeds the "
            f"{MAX_FILLABLE_GAP_H:g} h interpolation limit"
        )

    out_s: list[np.int64] = []
    out_d: list[float] = []
    out_i: list[float] = []
    out_p: list[float] = []
    gap_set = set(int(i) for i in gap_idx)
    for i in range(len(starts)):
        out_s.append(starts_s[i])
        out_d.append(float(durations[i]))
        out_i.append(float(intensity[i]))
        out_p.append(float(price[i]))
        if i in gap_set:
            # synthetic intervals at the finer neighbour duration, values
            # interpolated between the neighbouring interval midpoints
            step_h = min(float(durations[i]), float(durations[i + 1]))
            gap = float(gap_h[i])
            n_fill = max(1, int(round(gap / step_h)))
            fill_d = gap / n_fill
            mid_left = starts_s[i] + 0.5 * durations[i] * 3600.0
            mid_right = starts_s[i + 1] + 0.5 * durations[i + 1] * 3600.0
            span = mid_right - mid_left
            for k in range(n_fill):
                fs = ends_s[i] + np.int64(round(k * fill_d * 3600.0))
                fm = fs + 0.5 * fill_d * 3600.0
                w = (fm - mid_left) / span
                out_s.append(fs)
                out_d.append(fill_d)
                out_i.append(intensity[i] + w * (intensity[i + 1] - intensity[i]))
                out_p.append(price[i] + w * (price[i + 1] - price[i]))
    return (
        np.array(out_s, dtype=np.int64).astype("datetime64[s]"),
        np.array(out_d, dtype=np.float64),
        np.array(out_i, dtype=np.float64),
        np.array(out_p, dtype=np.float64),
    )


# ---------------------------------------------------------------------------
# Yearly aggregation
# ---------------------------------------------------------------------------


def hours_in_year(year: int) -> float:
    days = 366 if (year % 4 == 0 and (year % 100 != 0 or year % 400 == 0)) else 365
    return 24.0 * days


def yearly_summary(
    series_by_year: Mapping[int, IntervalSeries],
    generation_by_year: Mapping[int, Iterable[GenerationRecord]],
    allow_partial: bool = False,
) -> RenewableShareTable:
    """Yearly renewable share and generation-weighted mean intensity.

    The share is renewable MWh over total MWh (non-negative generation only,
    consistent with the blend); the mean intensity weights each interval by
    its total generation. Years covering less than 95% of their calendar
    hours are rejected unless ``allow_partial`` is set.
    """
    rows = []
    for year in sorted(series_by_year):
        series = series_by_year[year]
        coverage = series.t_total / hours_in_year(year)
        if coverage < 0.95 and not allow_partial:
            raise DataQualityError(
                f"year {year} covers only {100 * coverage:.1f}% of its hours; "
                f"pass allow_partial to accept"
            )
        try:
            gen_records = generation_by_year[year]
        except KeyError:
            raise DataQualityError(
                f"no generation records supplied for year {year}"
            ) from None
        totals_by_start: dict[np.datetime64, float] = {}
        renewable = 0.0
        total = 0.0
        for rec in gen_records:
            rec_total = 0.0
            for src, gen in rec.per_source_mwh.items():
                if gen < 0.0:
                    continue
                rec_total += gen
                if src in RENEWABLE_SOURCES:
                    renewable += gen
            total += rec_total
            totals_by_start[rec.start_utc] = rec_total
        if total <= 0.0:
            raise DataQualityError(f"year {year} has zero total generation")

        weights = np.array(
            [totals_by_start.get(ts, 0.0) for ts in series.start_utc],
            dtype=np.float64,
        )
        if np.sum(weights) <= 0.0:
            # series was built from other records (for instance a canonical
            # CSV written elsewhere); fall back to duration weighting
            weights = series.duration_h
        mean_intensity = float(
            np.sum(series.intensity * weights) / np.sum(weights)
        )
        rows.append(
            ShareRow(
                year=year,
                renewable_share_percent=100.0 * renewable / total,
                mean_intensity_kg_per_mwh=mean_intensity,
            )
        )
    return RenewableShareTable(rows=tuple(rows))
