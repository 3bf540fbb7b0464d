"""Bundled synthetic benchmark dataset.

The package ships no measured data. Instead this module generates, from
frozen constants, a deterministic multi-year dataset shaped like a national
grid's published numbers: per-interval generation broken down by type, spot
prices, and per-year emission factor tables. The files go through the exact
same ingestion path as real data would.

Construction works backwards from the quantity the dispatch model cares
about. A seeded autocorrelated shape process (synoptic AR(1) plus diurnal and
weekly harmonics) fixes the time ordering; its ranks are pushed through a
piecewise-linear quantile curve, so the year's intensity distribution equals
the designed curve exactly. Each interval's generation mix is then solved so
the generation-weighted blend reproduces that intensity value while the
year's renewable share lands exactly on its target: the renewable basket
factor is fixed first, and a year-wide shift of the gas-vs-coal split is
bisected until the share closes. Storage charging shows up as negative
generation and takes no part in the blend.

Quantile curves, yearly means, share targets and seeds live in
``_calibration.py``; regenerate them with ``tools/calibrate_benchmark.py``.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np
import pandas as pd
from scipy.signal import lfilter

from .energy_data import hours_in_year

DEFAULT_YEARS: tuple[int, ...] = tuple(range(2002, 2026))

#: Years with quarter-hour resolution; everything earlier is hourly.
FINE_RESOLUTION_FROM_YEAR = 2023

GENERATION_SOURCES = (
    "solar", "wind_onshore", "wind_offshore", "hydro", "biomass",
    "gas", "hard_coal", "lignite", "pumped_storage",
)

#: Relative weights of the renewable basket before solar's daylight
#: modulation and per-interval jitter.
_RENEWABLE_BASE_WEIGHTS = {
    "solar": 0.26,
    "wind_onshore": 0.36,
    "wind_offshore": 0.13,
    "hydro": 0.12,
    "biomass": 0.10,
}

#: Keep the renewable basket factor at least this far below the interval's
#: intensity so the mix solve stays inside [0, total generation].
_BLEND_MARGIN_KG_PER_MWH = 6.0


# Quantile curves are tuples of segments; each segment is a tuple of (p, q)
# points interpolated linearly. Segments partition [0, 1] and may jump at
# their boundaries (a bimodal distribution has a gap between two segments).
Segment = Sequence[Sequence[float]]
QuantileCurve = Sequence[Segment]


def eval_quantile_curve(curve: QuantileCurve, p: np.ndarray) -> np.ndarray:
    out = np.full(p.shape, np.nan)
    n_seg = len(curve)
    for i, seg in enumerate(curve):
        xs = np.array([pt[0] for pt in seg], dtype=np.float64)
        ys = np.array([pt[1] for pt in seg], dtype=np.float64)
        if i < n_seg - 1:
            mask = (p >= xs[0]) & (p < xs[-1])
        else:
            mask = (p >= xs[0]) & (p <= xs[-1] + 1e-12)
        out[mask] = np.interp(p[mask], xs, ys)
    if np.any(np.isnan(out)):
        raise ValueError("quantile curve segments do not cover [0, 1]")
    return out


@dataclass(frozen=True)
class BenchmarkConfig:
    """Everything the generator needs, frozen into ``_calibration.py``."""

    intensity_curves: Mapping[int, QuantileCurve]
    price_curves: Mapping[int, QuantileCurve]
    generic_intensity_shape: QuantileCurve
    generic_price_shape: QuantileCurve
    mean_intensity: Mapping[int, float]
    intensity_spread: Mapping[int, float]
    price_level: Mapping[int, tuple[float, float]]
    renewable_share_percent: Mapping[int, float]
    total_generation_gw: Mapping[int, float]
    emission_factors: Mapping[str, float]
    shape_tau_h: float
    shape_diurnal: float
    shape_weekly: float
    shape_noise: float
    price_coupling: float
    price_diurnal: float
    intensity_seed: Mapping[int, int]


def default_config() -> BenchmarkConfig:
    from . import _calibration as cal

    return BenchmarkConfig(
        intensity_curves=cal.INTENSITY_CURVES,
        price_curves=cal.PRICE_CURVES,
        generic_intensity_shape=cal.GENERIC_INTENSITY_SHAPE,
        generic_price_shape=cal.GENERIC_PRICE_SHAPE,
        mean_intensity=cal.MEAN_INTENSITY,
        intensity_spread=cal.INTENSITY_SPREAD,
        price_level=cal.PRICE_LEVEL,
        renewable_share_percent=cal.RENEWABLE_SHARE_PERCENT,
        total_generation_gw=cal.TOTAL_GENERATION_GW,
        emission_factors=cal.EMISSION_FACTORS,
        shape_tau_h=cal.SHAPE_TAU_H,
        shape_diurnal=cal.SHAPE_DIURNAL,
        shape_weekly=cal.SHAPE_WEEKLY,
        shape_noise=cal.SHAPE_NOISE,
        price_coupling=cal.PRICE_COUPLING,
        price_diurnal=cal.PRICE_DIURNAL,
        intensity_seed=cal.INTENSITY_SEED,
    )


# ---------------------------------------------------------------------------
# Shape process and rank transform
# ---------------------------------------------------------------------------


def _ar1(rng: np.random.Generator, n: int, phi: float) -> np.ndarray:
    innov = rng.normal(0.0, np.sqrt(1.0 - phi * phi), n)
    innov[0] = rng.normal()  # stationary start
    return lfilter([1.0], [1.0, -phi], innov)


def _shape_process(
    rng: np.random.Generator, n: int, step_h: float, cfg: BenchmarkConfig
) -> np.ndarray:
    phi = float(np.exp(-step_h / cfg.shape_tau_h))
    synoptic = _ar1(rng, n, phi)
    hours = np.arange(n) * step_h
    diurnal = -np.cos(2.0 * np.pi * (hours % 24.0 - 14.0) / 24.0)
    weekly = np.sin(2.0 * np.pi * (hours % 168.0) / 168.0)
    noise = rng.normal(0.0, 1.0, n)
    return (
        synoptic
        + cfg.shape_diurnal * diurnal
        + cfg.shape_weekly * weekly
        + cfg.shape_noise * noise
    )


def _ranks_to_p(z: np.ndarray) -> np.ndarray:
    order = np.argsort(z, kind="stable")
    ranks = np.empty(len(z), dtype=np.float64)
    ranks[order] = np.arange(len(z), dtype=np.float64)
    return (ranks + 0.5) / len(z)


def _intensity_values(year: int, z: np.ndarray, cfg: BenchmarkConfig
                      ) -> np.ndarray:
    p = _ranks_to_p(z)
    target_mean = cfg.mean_intensity[year]
    if year in cfg.intensity_curves:
        values = eval_quantile_curve(cfg.intensity_curves[year], p)
    else:
        shape = eval_quantile_curve(cfg.generic_intensity_shape, p)
        values = target_mean + cfg.intensity_spread[year] * shape
    # pin the year's mean exactly; the curves integrate to it already, so
    # this only absorbs the discretisation residue
    values = values + (target_mean - values.mean())
    if values.min() <= _BLEND_MARGIN_KG_PER_MWH:
        raise ValueError(
            f"{year}: intensity floor {values.min():.1f} leaves no room "
            f"for the renewable blend"
        )
    return values


def _price_values(year: int, z_price: np.ndarray, cfg: BenchmarkConfig
                  ) -> np.ndarray:
    p = _ranks_to_p(z_price)
    if year in cfg.price_curves:
        return eval_quantile_curve(cfg.price_curves[year], p)
    median, spread = cfg.price_level[year]
    return median + spread * eval_quantile_curve(cfg.generic_price_shape, p)


# ---------------------------------------------------------------------------
# Generation mix solve
# ---------------------------------------------------------------------------


def _daylight(hours_utc: np.ndarray) -> np.ndarray:
    hour_of_day = hours_utc % 24.0
    day_of_year = hours_utc / 24.0
    elevation = np.sin(np.pi * (hour_of_day - 5.0) / 14.0)
    season = 0.65 + 0.35 * np.cos(2.0 * np.pi * (day_of_year - 172.0) / 365.25)
    return np.clip(elevation, 0.0, None) * season


def _renewable_blend(
    rng: np.random.Generator,
    intensity: np.ndarray,
    hours_utc: np.ndarray,
    factors: Mapping[str, float],
) -> tuple[dict[str, np.ndarray], np.ndarray]:
    """Per-interval renewable sub-weights and the basket's blended factor.

    Weights are jittered and solar follows daylight; where the basket factor
    would crowd the interval's intensity, the mix shifts toward onshore wind
    until the margin holds.
    """
    n = len(intensity)
    names = list(_RENEWABLE_BASE_WEIGHTS)
    weights = np.empty((n, len(names)))
    for j, name in enumerate(names):
        base = _RENEWABLE_BASE_WEIGHTS[name]
        jitter = rng.uniform(0.88, 1.12, n)
        if name == "solar":
            weights[:, j] = base * jitter * _daylight(hours_utc)
        else:
            weights[:, j] = base * jitter
    weights /= weights.sum(axis=1, keepdims=True)

    f = np.array([factors[name] for name in names])
    blend = weights @ f
    cap = intensity - _BLEND_MARGIN_KG_PER_MWH
    exceed = blend > cap
    if np.any(exceed):
        wind_j = names.index("wind_onshore")
        f_wind = f[wind_j]
        theta = np.zeros(n)
        theta[exceed] = (blend[exceed] - cap[exceed]) / (
            blend[exceed] - f_wind
        )
        theta = np.clip(theta, 0.0, 1.0)
        weights *= (1.0 - theta)[:, None]
        weights[:, wind_j] += theta
        blend = weights @ f
    return {name: weights[:, j] for j, name in enumerate(names)}, blend


def _solve_mix(
    rng: np.random.Generator,
    intensity: np.ndarray,
    total_mwh: np.ndarray,
    renewable_factor: np.ndarray,
    share_target_percent: float,
    factors: Mapping[str, float],
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Split each interval's total generation so the blend equals the
    intensity and the yearly renewable share hits its target exactly.

    Returns (renewable, gas, hard_coal, lignite) in MWh. The free dimension
    is the gas fraction of fossil generation: a year-wide shift on its
    jittered base is bisected until the share closes.
    """
    f_gas = factors["gas"]
    coal_split = rng.uniform(0.44, 0.52, len(intensity))
    f_coal = coal_split * factors["hard_coal"] + (1.0 - coal_split) * factors[
        "lignite"
    ]
    gamma_base = rng.uniform(0.10, 0.30, len(intensity))
    # never let the fossil blend drop to the interval's intensity, or the
    # renewable share of that interval would be forced above one
    gamma_cap = 0.98 * (f_coal - intensity - _BLEND_MARGIN_KG_PER_MWH) / (
        f_coal - f_gas
    )
    gamma_cap = np.clip(gamma_cap, 0.02, 0.97)

    def renewables(shift: float) -> np.ndarray:
        gamma = np.clip(gamma_base + shift, 0.02, gamma_cap)
        f_mix = gamma * f_gas + (1.0 - gamma) * f_coal
        rho = (f_mix - intensity) / (f_mix - renewable_factor)
        return total_mwh * rho, gamma

    target = share_target_percent / 100.0
    total_sum = total_mwh.sum()
    lo, hi = -0.40, 0.70
    r_lo, _ = renewables(lo)
    r_hi, _ = renewables(hi)
    s_lo = r_lo.sum() / total_sum
    s_hi = r_hi.sum() / total_sum
    if not (s_hi <= target <= s_lo):
        raise ValueError(
            f"renewable share target {share_target_percent}% outside the "
            f"feasible band [{100 * s_hi:.1f}%, {100 * s_lo:.1f}%]"
        )
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        r_mid, _ = renewables(mid)
        if r_mid.sum() / total_sum > target:
            lo = mid
        else:
            hi = mid
    renewable, gamma = renewables(0.5 * (lo + hi))
    if renewable.min() < 0.0 or (renewable - total_mwh).max() > 1e-6:
        raise ValueError("generation mix solve left the feasible region")

    fossil = total_mwh - renewable
    gas = gamma * fossil
    coal = fossil - gas
    hard_coal = coal_split * coal
    lignite = coal - hard_coal
    return renewable, gas, hard_coal, lignite


# ---------------------------------------------------------------------------
# File generation
# ---------------------------------------------------------------------------


def _timestamps(year: int, step_h: float) -> tuple[np.ndarray, int]:
    n = int(round(hours_in_year(year) / step_h))
    start = np.datetime64(f"{year}-01-01T00:00:00", "s")
    step = np.timedelta64(int(round(step_h * 3600.0)), "s")
    return start + np.arange(n) * step, n


def _stamp_strings(stamps: np.ndarray) -> list[str]:
    return [
        s.replace("Z", "+00:00")
        for s in np.datetime_as_string(stamps, unit="s", timezone="UTC")
    ]


def generate_year(
    year: int, out_dir: str | Path, config: BenchmarkConfig | None = None
) -> dict[str, Path]:
    """Write one year's generation, price and factor files.

    Deterministic for a given year and calibration; returns the paths keyed
    by kind (``generation``, ``prices``, ``factors``).
    """
    cfg = config or default_config()
    if year not in cfg.mean_intensity:
        known = sorted(cfg.mean_intensity)
        raise ValueError(
            f"no benchmark calibration for {year}; available: "
            f"{known[0]}..{known[-1]}"
        )
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    step_h = 0.25 if year >= FINE_RESOLUTION_FROM_YEAR else 1.0
    stamps, n = _timestamps(year, step_h)
    hours_utc = np.arange(n) * step_h

    seed = cfg.intensity_seed[year]
    rng_shape = np.random.default_rng(seed)
    rng_price = np.random.default_rng(seed + 1009)
    rng_mix = np.random.default_rng(seed + 2003)
    rng_storage = np.random.default_rng(seed + 3001)

    z = _shape_process(rng_shape, n, step_h, cfg)
    intensity = _intensity_values(year, z, cfg)

    z_std = (z - z.mean()) / z.std()
    own = _shape_process(rng_price, n, step_h, cfg)
    own_std = (own - own.mean()) / own.std()
    evening = np.cos(2.0 * np.pi * (hours_utc % 24.0 - 19.0) / 24.0)
    z_price = (
        cfg.price_coupling * z_std
        + np.sqrt(1.0 - cfg.price_coupling**2) * own_std
        + cfg.price_diurnal * evening
    )
    price = _price_values(year, z_price, cfg)

    total_mwh = np.full(n, cfg.total_generation_gw[year] * 1000.0 * step_h)
    ren_weights, ren_factor = _renewable_blend(
        rng_mix, intensity, hours_utc, cfg.emission_factors
    )
    renewable, gas, hard_coal, lignite = _solve_mix(
        rng_mix, intensity, total_mwh, ren_factor,
        cfg.renewable_share_percent[year], cfg.emission_factors,
    )

    columns: dict[str, np.ndarray] = {}
    for name, w in ren_weights.items():
        columns[name] = np.round(renewable * w, 3)
    columns["gas"] = np.round(gas, 3)
    columns["hard_coal"] = np.round(hard_coal, 3)
    columns["lignite"] = np.round(lignite, 3)
    charging = rng_storage.random(n) < 0.08
    columns["pumped_storage"] = np.round(
        np.where(charging, -rng_storage.uniform(100.0, 900.0, n) * step_h, 0.0),
        3,
    )

    gen_df = pd.DataFrame({"start_utc": _stamp_strings(stamps),
                           "duration_h": np.full(n, step_h)})
    for name in GENERATION_SOURCES:
        gen_df[name] = columns[name]
    gen_path = out / f"generation_{year}.csv"
    gen_df.to_csv(gen_path, index=False)

    price_df = pd.DataFrame({
        "start_utc": _stamp_strings(stamps),
        "duration_h": np.full(n, step_h),
        "price_eur_per_mwh": np.round(price, 2),
    })
    price_path = out / f"prices_{year}.csv"
    price_df.to_csv(price_path, index=False)

    factor_path = out / f"factors_{year}.csv"
    pd.DataFrame({
        "source": list(cfg.emission_factors),
        "kg_per_mwh": [cfg.emission_factors[s] for s in cfg.emission_factors],
    }).to_csv(factor_path, index=False)

    return {"generation": gen_path, "prices": price_path,
            "factors": factor_path}


def generate_dataset(
    out_dir: str | Path,
    years: Iterable[int] = DEFAULT_YEARS,
    config: BenchmarkConfig | None = None,
) -> Path:
    """Write the full multi-year dataset plus a manifest with checksums."""
    out = Path(out_dir)
    manifest: dict[str, dict[str, dict[str, str]]] = {"years": {}}
    for year in years:
        paths = generate_year(year, out, config)
        manifest["years"][str(year)] = {
            kind: {
                "file": p.name,
                "sha256": hashlib.sha256(p.read_bytes()).hexdigest(),
            }
            for kind, p in paths.items()
        }
    manifest_path = out / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n",
                             encoding="utf-8")
    return manifest_path
