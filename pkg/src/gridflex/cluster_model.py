"""Cluster hardware setups and workload scenarios.

A cluster is reduced to per-core quantities: the maximum and idle power draw
of a logical core, the hourly embedded-emission rate amortising manufacturing
and transport over the hardware lifetime, and the hourly acquisition cost.
Workloads are mixtures of load points; power is assumed to scale linearly
between P_idle and P_max, so the workload-averaged draw is a plain weighted
sum of interpolated powers. Everything here is an immutable value type; the
dispatch objectives consume these numbers without ever touching raw data.

Five built-in setups and three built-in workload scenarios ship in a registry
(values measured on real worker nodes of research clusters); additional ones
can be loaded from a TOML config, see :func:`load_config`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .units import HOURS_PER_YEAR


@dataclass(frozen=True)
class ClusterSetup:
    """Per-core constants of a homogeneous cluster.

    Power in W per logical core, embedded emissions in kg CO2 per core hour,
    acquisition cost in EUR per core hour.
    """

    name: str
    n_cores: int
    p_max_w: float
    p_idle_w: float
    e_embedded_kg_per_core_hour: float
    c_acq_eur_per_core_hour: float = 0.0

    def __post_init__(self) -> None:
        if self.n_cores < 1:
            raise ValueError(f"n_cores must be >= 1, got {self.n_cores}")
        if not 0.0 <= self.p_idle_w <= self.p_max_w:
            raise ValueError(
                f"need 0 <= P_idle <= P_max, got P_idle={self.p_idle_w} "
                f"P_max={self.p_max_w}"
            )
        if self.e_embedded_kg_per_core_hour < 0.0:
            raise ValueError("embedded emission rate must be >= 0")
        if self.c_acq_eur_per_core_hour < 0.0:
            raise ValueError("acquisition rate must be >= 0")

    @property
    def idle_ratio(self) -> float:
        """P_idle / P_max, the decisive parameter for dynamic operation."""
        return self.p_idle_w / self.p_max_w

    def with_idle_ratio(self, ratio: float) -> "ClusterSetup":
        """Copy of this setup with P_idle = ratio * P_max."""
        if not 0.0 <= ratio <= 1.0:
            raise ValueError(f"idle ratio must lie in [0, 1], got {ratio}")
        return ClusterSetup(
            name=self.name,
            n_cores=self.n_cores,
            p_max_w=self.p_max_w,
            p_idle_w=ratio * self.p_max_w,
            e_embedded_kg_per_core_hour=self.e_embedded_kg_per_core_hour,
            c_acq_eur_per_core_hour=self.c_acq_eur_per_core_hour,
        )

    def with_embedded_rate(self, rate: float) -> "ClusterSetup":
        if rate < 0.0:
            raise ValueError("embedded emission rate must be >= 0")
        return ClusterSetup(
            name=self.name,
            n_cores=self.n_cores,
            p_max_w=self.p_max_w,
            p_idle_w=self.p_idle_w,
            e_embedded_kg_per_core_hour=rate,
            c_acq_eur_per_core_hour=self.c_acq_eur_per_core_hour,
        )

    def with_acq_rate(self, rate: float) -> "ClusterSetup":
        if rate < 0.0:
            raise ValueError("acquisition rate must be >= 0")
        return ClusterSetup(
            name=self.name,
            n_cores=self.n_cores,
            p_max_w=self.p_max_w,
            p_idle_w=self.p_idle_w,
            e_embedded_kg_per_core_hour=self.e_embedded_kg_per_core_hour,
            c_acq_eur_per_core_hour=rate,
        )


@dataclass(frozen=True)
class WorkloadScenario:
    """Mixture of load points with the time fraction spent at each.

    ``modes`` is a tuple of (load, time_fraction) pairs; loads are fractions
    of full load in [0, 1], time fractions must sum to one.
    """

    name: str
    modes: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        if not self.modes:
            raise ValueError("workload needs at least one load mode")
        loads = [m[0] for m in self.modes]
        fracs = [m[1] for m in self.modes]
        if any(not 0.0 <= lo <= 1.0 for lo in loads):
            raise ValueError(f"loads must lie in [0, 1], got {loads}")
        if any(f < 0.0 for f in fracs):
            raise ValueError(f"time fractions must be >= 0, got {fracs}")
        if len(set(loads)) != len(loads):
            raise ValueError(f"load points must be distinct, got {loads}")
        total = sum(fracs)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"time fractions must sum to 1, got {total!r}")


@dataclass(frozen=True)
class TariffModel:
    """Capacity-based charge of the electricity supplier."""

    c_yearly_demand_eur_per_kw: float = 100.0
    hours_per_year: float = HOURS_PER_YEAR

    def __post_init__(self) -> None:
        if self.c_yearly_demand_eur_per_kw < 0.0:
            raise ValueError("demand charge must be >= 0")
        if self.hours_per_year <= 0.0:
            raise ValueError("hours per year must be > 0")


@dataclass(frozen=True)
class EmbeddedEstimate:
    """Inputs for amortising embedded emissions of one rack server.

    ``storage_sef_kg_per_gb`` and ``storage_gb`` support substituting the
    storage medium: the default estimate for a server carries SSD-dominated
    manufacturing emissions, and an HDD-based node replaces those at a much
    lower storage emission factor (kg CO2 per GB).
    """

    per_server_kg: float
    cores_per_server: int
    lifetime_years: float

    def __post_init__(self) -> None:
        if self.per_server_kg < 0.0:
            raise ValueError("per-server emissions must be >= 0")
        if self.cores_per_server < 1:
            raise ValueError("cores per server must be >= 1")
        if self.lifetime_years <= 0.0:
            raise ValueError("lifetime must be > 0")

    def substitute_storage(
        self,
        storage_gb: float,
        sef_old_kg_per_gb: float,
        sef_new_kg_per_gb: float,
    ) -> "EmbeddedEstimate":
        """Estimate with ``storage_gb`` of storage swapped to a new medium.

        The per-server total is reduced by storage_gb * (sef_old - sef_new).
        The capacity that closes the books for a given target rate is not
        published anywhere; it is an explicit input here on purpose.
        """
        if storage_gb < 0.0:
            raise ValueError("storage capacity must be >= 0")
        if sef_old_kg_per_gb < 0.0 or sef_new_kg_per_gb < 0.0:
            raise ValueError("storage emission factors must be >= 0")
        delta = storage_gb * (sef_old_kg_per_gb - sef_new_kg_per_gb)
        new_total = self.per_server_kg - delta
        if new_total < 0.0:
            raise ValueError(
                f"storage substitution would drive per-server emissions "
                f"negative ({new_total:.1f} kg)"
            )
        return EmbeddedEstimate(
            per_server_kg=new_total,
            cores_per_server=self.cores_per_server,
            lifetime_years=self.lifetime_years,
        )


def power_at_load(setup: ClusterSetup, load: float) -> float:
    """Per-core power draw in W at a partial load, linear in the load."""
    if not 0.0 <= load <= 1.0:
        raise ValueError(f"load must lie in [0, 1], got {load}")
    return setup.p_idle_w + load * (setup.p_max_w - setup.p_idle_w)


def average_power(setup: ClusterSetup, workload: WorkloadScenario) -> float:
    """Workload-averaged per-core power draw in W (P_avg)."""
    return sum(
        frac * power_at_load(setup, load) for load, frac in workload.modes
    )


def embedded_rate(est: EmbeddedEstimate) -> float:
    """Hourly embedded emissions per logical core in kg CO2 per hour."""
    return est.per_server_kg / (
        est.cores_per_server * est.lifetime_years * HOURS_PER_YEAR
    )


# ---------------------------------------------------------------------------
# Built-in registry
# ---------------------------------------------------------------------------

#: Reference estimate behind the registry's embedded rates: one rack server
#: at 4092 kg CO2 (manufacturing 4288 kg + transport 3 kg - end-of-life
#: credit 199 kg), 256 logical cores, 10 year lifetime.
SERVER_EMBEDDED_ESTIMATE = EmbeddedEstimate(
    per_server_kg=4092.0, cores_per_server=256, lifetime_years=10.0
)

#: Average storage emission factors (kg CO2 per GB) used for the HDD-based
#: BAF_default node. The ~26.8 TB capacity closes the published per-core rate
#: of 1.5e-5 kg/h; it is an assumption, not a measured value.
SEF_SSD_KG_PER_GB = 0.16
SEF_HDD_KG_PER_GB = 0.02
HDD_SUBSTITUTED_STORAGE_GB = 26_825.8

_ACQ_BAF_EUR_PER_CORE_HOUR = 5.35e-4

BUILTIN_SETUPS: dict[str, ClusterSetup] = {
    s.name: s
    for s in (
        ClusterSetup(
            name="baf_default",
            n_cores=7104,
            p_max_w=9.2,
            p_idle_w=2.3,
            e_embedded_kg_per_core_hour=1.5e-5,
            c_acq_eur_per_core_hour=_ACQ_BAF_EUR_PER_CORE_HOUR,
        ),
        ClusterSetup(
            name="baf_modern",
            n_cores=2816,
            p_max_w=7.6,
            p_idle_w=1.1,
            e_embedded_kg_per_core_hour=1.8e-4,
            c_acq_eur_per_core_hour=_ACQ_BAF_EUR_PER_CORE_HOUR,
        ),
        ClusterSetup(
            name="deep_cm",
            n_cores=2400,
            p_max_w=7.8,
            p_idle_w=2.6,
            e_embedded_kg_per_core_hour=1.8e-4,
        ),
        ClusterSetup(
            name="deep_dam",
            n_cores=1536,
            p_max_w=6.9,
            p_idle_w=3.3,
            e_embedded_kg_per_core_hour=1.8e-4,
        ),
        ClusterSetup(
            name="gridka_arm",
            n_cores=2816,
            p_max_w=2.9,
            p_idle_w=0.9,
            e_embedded_kg_per_core_hour=1.8e-4,
        ),
    )
}

BUILTIN_WORKLOADS: dict[str, WorkloadScenario] = {
    w.name: w
    for w in (
        WorkloadScenario(
            name="medium",
            modes=((0.0, 0.25), (0.1, 0.30), (0.5, 0.35), (1.0, 0.10)),
        ),
        WorkloadScenario(
            name="heavy",
            modes=((0.0, 0.10), (0.1, 0.20), (0.5, 0.55), (1.0, 0.15)),
        ),
        WorkloadScenario(
            name="backfilling",
            modes=((0.0, 0.05), (1.0, 0.95)),
        ),
    )
}

DEFAULT_TARIFF = TariffModel()


@dataclass
class Registry:
    """Named setups, workloads and the tariff available to a run."""

    setups: dict[str, ClusterSetup] = field(
        default_factory=lambda: dict(BUILTIN_SETUPS)
    )
    workloads: dict[str, WorkloadScenario] = field(
        default_factory=lambda: dict(BUILTIN_WORKLOADS)
    )
    tariff: TariffModel = DEFAULT_TARIFF

    def setup(self, name: str) -> ClusterSetup:
        try:
            return self.setups[name]
        except KeyError:
            known = ", ".join(sorted(self.setups))
            raise KeyError(f"unknown setup {name!r} (known: {known})") from None

    def workload(self, name: str) -> WorkloadScenario:
        try:
            return self.workloads[name]
        except KeyError:
            known = ", ".join(sorted(self.workloads))
            raise KeyError(
                f"unknown workload {name!r} (known: {known})"
            ) from None


def load_config(path: str | Path) -> Registry:
    """Registry extended by user-defined entries from a TOML file.

    Recognised tables::

        [setup.<name>]
        n_cores = 1024
        p_max_w = 8.0
        p_idle_w = 1.5
        e_embedded_kg_per_core_hour = 1.8e-4
        c_acq_eur_per_core_hour = 5.35e-4   # optional

        [workload.<name>]
        modes = [[0.0, 0.05], [1.0, 0.95]]

        [tariff]
        c_yearly_demand_eur_per_kw = 100.0

    Built-in names can be overridden; everything else stays available.
    """
    raw = tomllib.loads(Path(path).read_text(encoding="utf-8"))
    reg = Registry()
    for name, body in raw.get("setup", {}).items():
        try:
            reg.setups[name] = ClusterSetup(
                name=name,
                n_cores=int(body["n_cores"]),
                p_max_w=float(body["p_max_w"]),
                p_idle_w=float(body["p_idle_w"]),
                e_embedded_kg_per_core_hour=float(
                    body["e_embedded_kg_per_core_hour"]
                ),
                c_acq_eur_per_core_hour=float(
                    body.get("c_acq_eur_per_core_hour", 0.0)
                ),
            )
        except KeyError as exc:
            raise ValueError(f"[setup.{name}] is missing key {exc}") from None
    for name, body in raw.get("workload", {}).items():
        modes = body.get("modes")
        if not modes:
            raise ValueError(f"[workload.{name}] needs a 'modes' list")
        reg.workloads[name] = WorkloadScenario(
            name=name,
            modes=tuple((float(lo), float(fr)) for lo, fr in modes),
        )
    if "tariff" in raw:
        reg.tariff = TariffModel(
            c_yearly_demand_eur_per_kw=float(
                raw["tariff"].get("c_yearly_demand_eur_per_kw", 100.0)
            )
        )
    return reg
