"""Hardware model: power interpolation, embedded rates, registry, config."""

from __future__ import annotations

import dataclasses

import numpy as np
import pytest

from gridflex.cluster_model import (
    BUILTIN_SETUPS,
    BUILTIN_WORKLOADS,
    HDD_SUBSTITUTED_STORAGE_GB,
    SEF_HDD_KG_PER_GB,
    SEF_SSD_KG_PER_GB,
    SERVER_EMBEDDED_ESTIMATE,
    ClusterSetup,
    EmbeddedEstimate,
    Registry,
    TariffModel,
    WorkloadScenario,
    average_power,
    embedded_rate,
    load_config,
    power_at_load,
)
from gridflex.units import HOURS_PER_YEAR


def _setup(p_max=7.6, p_idle=1.1, n_cores=1, embedded=0.0, acq=0.0):
    return ClusterSetup(
        name="t",
        n_cores=n_cores,
        p_max_w=p_max,
        p_idle_w=p_idle,
        e_embedded_kg_per_core_hour=embedded,
        c_acq_eur_per_core_hour=acq,
    )


def _random_workload(rng, n_modes=None):
    n = n_modes or int(rng.integers(1, 6))
    loads = np.sort(rng.choice(np.linspace(0.0, 1.0, 101), n, replace=False))
    fracs = rng.random(n) + 0.05
    fracs = fracs / fracs.sum()
    return WorkloadScenario(
        name="w", modes=tuple(zip(loads.tolist(), fracs.tolist()))
    )


# ---------------------------------------------------------------------------
# power_at_load / average_power
# ---------------------------------------------------------------------------


def test_power_at_load_endpoints_and_midpoint():
    s = _setup()
    assert power_at_load(s, 0.0) == 1.1
    assert power_at_load(s, 1.0) == 7.6
    assert power_at_load(s, 0.5) == pytest.approx(4.35)


def test_power_at_load_rejects_out_of_range():
    s = _setup()
    with pytest.raises(ValueError, match="load"):
        power_at_load(s, -0.01)
    with pytest.raises(ValueError, match="load"):
        power_at_load(s, 1.01)


def test_average_power_backfilling_hand_value():
    # 5% idle at 1.1 W, 95% full load at 7.6 W
    s = BUILTIN_SETUPS["baf_modern"]
    w = BUILTIN_WORKLOADS["backfilling"]
    assert average_power(s, w) == pytest.approx(7.275, abs=1e-12)


def test_average_power_medium_hand_value():
    s = BUILTIN_SETUPS["baf_modern"]
    w = BUILTIN_WORKLOADS["medium"]
    assert average_power(s, w) == pytest.approx(3.0825, abs=1e-12)


def test_average_power_all_idle_equals_p_idle():
    s = _setup()
    w = WorkloadScenario(name="off", modes=((0.0, 1.0),))
    assert average_power(s, w) == s.p_idle_w


def test_average_power_is_linear_in_expected_load():
    rng = np.random.default_rng(7)
    for _ in range(200):
        p_max = float(rng.uniform(1.0, 20.0))
        s = _setup(p_max=p_max, p_idle=float(rng.uniform(0.0, p_max)))
        w = _random_workload(rng)
        expected_load = sum(f * lo for lo, f in w.modes)
        direct = s.p_idle_w + expected_load * (s.p_max_w - s.p_idle_w)
        assert average_power(s, w) == pytest.approx(direct, rel=1e-12)


def test_average_power_monotone_in_load_and_fraction_shift():
    rng = np.random.default_rng(11)
    for _ in range(200):
        s = _setup(p_max=float(rng.uniform(2.0, 15.0)),
                   p_idle=float(rng.uniform(0.0, 1.5)))
        w = _random_workload(rng, n_modes=3)
        base = average_power(s, w)

        # raise the highest load point
        loads = [lo for lo, _ in w.modes]
        fracs = [f for _, f in w.modes]
        bumped_load = min(1.0, loads[-1] + 0.07)
        if bumped_load > loads[-1]:
            up = WorkloadScenario(
                name="w",
                modes=tuple(zip(loads[:-1] + [bumped_load], fracs)),
            )
            assert average_power(s, up) >= base

        # shift time from the lowest to the highest load point
        delta = min(0.5 * fracs[0], 0.2)
        shifted = list(fracs)
        shifted[0] -= delta
        shifted[-1] += delta
        shifted_w = WorkloadScenario(
            name="w", modes=tuple(zip(loads, shifted))
        )
        assert average_power(s, shifted_w) >= base - 1e-12


def test_average_power_degenerate_flat_power():
    rng = np.random.default_rng(13)
    for _ in range(50):
        p = float(rng.uniform(0.5, 20.0))
        s = _setup(p_max=p, p_idle=p)
        w = _random_workload(rng)
        assert average_power(s, w) == pytest.approx(p, rel=1e-12)


# ---------------------------------------------------------------------------
# embedded emissions
# ---------------------------------------------------------------------------


def test_server_estimate_matches_registry_rate_within_rounding():
    rate = embedded_rate(SERVER_EMBEDDED_ESTIMATE)
    assert rate == pytest.approx(
        4092.0 / (256 * 10.0 * HOURS_PER_YEAR), rel=1e-12
    )
    assert rate == pytest.approx(1.83e-4, rel=5e-3)
    # registry value is that rate rounded to two significant digits
    assert rate == pytest.approx(1.8e-4, rel=0.02)


def test_zero_server_emissions_give_zero_rate():
    est = EmbeddedEstimate(per_server_kg=0.0, cores_per_server=64,
                           lifetime_years=5.0)
    assert embedded_rate(est) == 0.0


def test_embedded_rate_inverse_scaling():
    rng = np.random.default_rng(17)
    base = EmbeddedEstimate(per_server_kg=4092.0, cores_per_server=256,
                            lifetime_years=10.0)
    rate = embedded_rate(base)
    assert embedded_rate(dataclasses.replace(base, lifetime_years=20.0)) \
        == rate / 2.0
    assert embedded_rate(dataclasses.replace(base, cores_per_server=1024)) \
        == rate / 4.0
    for _ in range(100):
        m = int(rng.integers(2, 50))
        scaled = dataclasses.replace(
            base, cores_per_server=base.cores_per_server * m
        )
        assert embedded_rate(scaled) * m == pytest.approx(rate, rel=1e-12)


def test_hdd_substitution_reproduces_low_rate():
    swapped = SERVER_EMBEDDED_ESTIMATE.substitute_storage(
        HDD_SUBSTITUTED_STORAGE_GB, SEF_SSD_KG_PER_GB, SEF_HDD_KG_PER_GB
    )
    assert embedded_rate(swapped) == pytest.approx(1.5e-5, rel=1e-3)


def test_substitution_rejects_negative_totals():
    with pytest.raises(ValueError, match="negative"):
        SERVER_EMBEDDED_ESTIMATE.substitute_storage(1e6, 0.16, 0.02)


# ---------------------------------------------------------------------------
# validation of the value types
# ---------------------------------------------------------------------------


def test_setup_validation():
    with pytest.raises(ValueError, match="n_cores"):
        _setup(n_cores=0)
    with pytest.raises(ValueError, match="P_idle"):
        ClusterSetup(name="t", n_cores=1, p_max_w=5.0, p_idle_w=6.0,
                     e_embedded_kg_per_core_hour=0.0)
    with pytest.raises(ValueError, match="embedded"):
        _setup(embedded=-1e-6)
    with pytest.raises(ValueError, match="acquisition"):
        _setup(acq=-0.1)


def test_workload_validation():
    with pytest.raises(ValueError, match="at least one"):
        WorkloadScenario(name="w", modes=())
    with pytest.raises(ValueError, match="sum to 1"):
        WorkloadScenario(name="w", modes=((0.0, 0.5), (1.0, 0.6)))
    with pytest.raises(ValueError, match="distinct"):
        WorkloadScenario(name="w", modes=((0.5, 0.5), (0.5, 0.5)))
    with pytest.raises(ValueError, match="loads"):
        WorkloadScenario(name="w", modes=((1.5, 1.0),))


def test_with_idle_ratio_bounds_and_effect():
    s = _setup()
    assert s.with_idle_ratio(0.0).p_idle_w == 0.0
    assert s.with_idle_ratio(1.0).p_idle_w == s.p_max_w
    assert s.with_idle_ratio(0.5).idle_ratio == pytest.approx(0.5)
    with pytest.raises(ValueError, match="idle ratio"):
        s.with_idle_ratio(1.2)


def test_tariff_validation():
    with pytest.raises(ValueError, match="demand charge"):
        TariffModel(c_yearly_demand_eur_per_kw=-1.0)
    assert TariffModel().hours_per_year == HOURS_PER_YEAR


# ---------------------------------------------------------------------------
# registry and config loading
# ---------------------------------------------------------------------------


def test_registry_ships_five_setups_and_three_workloads():
    reg = Registry()
    assert sorted(reg.setups) == [
        "baf_default", "baf_modern", "deep_cm", "deep_dam", "gridka_arm",
    ]
    assert sorted(reg.workloads) == ["backfilling", "heavy", "medium"]
    baf = reg.setup("baf_default")
    assert (baf.n_cores, baf.p_max_w, baf.p_idle_w) == (7104, 9.2, 2.3)
    assert reg.setup("gridka_arm").p_max_w == 2.9


def test_registry_unknown_names():
    reg = Registry()
    with pytest.raises(KeyError, match="unknown setup"):
        reg.setup("nope")
    with pytest.raises(KeyError, match="unknown workload"):
        reg.workload("nope")


def test_load_config_adds_and_overrides(tmp_path):
    cfg = tmp_path / "clusters.toml"
    cfg.write_text(
        """
[setup.lab]
n_cores = 128
p_max_w = 11.0
p_idle_w = 2.0
e_embedded_kg_per_core_hour = 2.0e-4

[setup.baf_modern]
n_cores = 2816
p_max_w = 7.6
p_idle_w = 0.0
e_embedded_kg_per_core_hour = 1.8e-4

[workload.bursty]
modes = [[0.0, 0.5], [1.0, 0.5]]

[tariff]
c_yearly_demand_eur_per_kw = 80.0
""",
        encoding="utf-8",
    )
    reg = load_config(cfg)
    assert reg.setup("lab").n_cores == 128
    assert reg.setup("baf_modern").p_idle_w == 0.0  # override wins
    assert reg.setup("baf_default").n_cores == 7104  # builtins remain
    assert reg.workload("bursty").modes == ((0.0, 0.5), (1.0, 0.5))
    assert reg.tariff.c_yearly_demand_eur_per_kw == 80.0


def test_load_config_missing_key(tmp_path):
    cfg = tmp_path / "bad.toml"
    cfg.write_text("[setup.x]\nn_cores = 8\n", encoding="utf-8")
    with pytest.raises(ValueError, match=r"\[setup.x\]"):
        load_config(cfg)
