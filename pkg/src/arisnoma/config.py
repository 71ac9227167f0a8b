"""Flat key=value scenario files: parsing, validation, canonical hashing.

Keys carry their units (dBm, meters, BPCU) so that a config file can
never be misread by a factor of a thousand. Unknown keys and malformed
values are reported with their line number.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import ConfigError
from .metrics import PowerModel
from .system import SystemConfig, dbm_to_watts

__all__ = ["RunSpec", "parse_config", "load_config", "config_hash", "METRICS", "VARIANTS"]

METRICS = (
    "outage_g",
    "outage_f",
    "outage_o",
    "rate_g",
    "rate_f",
    "rate_o",
    "throughput_dl",
    "throughput_dt",
    "throughput_dl_oma",
    "ee_dl",
    "ee_dt",
)
VARIANTS = ("aris_ipsic", "aris_psic", "pris_ipsic", "pris_psic")

_MC_METRICS = {"outage_g", "outage_f", "outage_o", "rate_g", "rate_f", "rate_o"}


def _as_int(s: str) -> int:
    return int(s)


def _as_float(s: str) -> float:
    return float(s)


def _as_str(s: str) -> str:
    return s


def _as_float_list(s: str):
    return tuple(float(tok) for tok in s.replace(",", " ").split())


def _as_str_list(s: str):
    return tuple(tok.strip() for tok in s.split(",") if tok.strip())


# key -> (caster, target): "system" fields map onto SystemConfig, "power"
# onto PowerModel, "run" onto the sweep/run settings.
_SCHEMA = {
    "name": (_as_str, "run"),
    "k_users": (_as_int, "system"),
    "rank_g": (_as_int, "system"),
    "rank_f": (_as_int, "system"),
    "elements": (_as_int, "system"),
    "beta": (_as_float, "system"),
    "xi": (_as_int, "system"),
    "varpi": (_as_int, "system"),
    "p_b_dbm": (_as_float, "system"),
    "a_g": (_as_float, "system"),
    "a_f": (_as_float, "system"),
    "kappa_b": (_as_float, "system"),
    "kappa_g": (_as_float, "system"),
    "kappa_f": (_as_float, "system"),
    "kappa_o": (_as_float, "system"),
    "n_tn_dbm": (_as_float, "system"),
    "sigma2_dbm": (_as_float, "system"),
    "d_br_m": (_as_float, "system"),
    "d_rg_m": (_as_float, "system"),
    "d_rf_m": (_as_float, "system"),
    "d_ro_m": (_as_float, "system"),
    "alpha": (_as_float, "system"),
    "eta": (_as_float, "system"),
    "m_r": (_as_float, "system"),
    "m_g": (_as_float, "system"),
    "m_f": (_as_float, "system"),
    "m_o": (_as_float, "system"),
    "omega_i": (_as_float, "system"),
    "m_i": (_as_float, "system"),
    "r_g_bpcu": (_as_float, "system"),
    "r_f_bpcu": (_as_float, "system"),
    "gamma_th_o": (_as_float, "system"),
    "quad_u": (_as_int, "system"),
    "quad_n": (_as_int, "system"),
    "guard_form": (_as_str, "system"),
    "ris_noise_model": (_as_str, "system"),
    "nu": (_as_float, "power"),
    "p_bs_w": (_as_float, "power"),
    "p_re_w": (_as_float, "power"),
    "p_u_w": (_as_float, "power"),
    "p_sw_w": (_as_float, "power"),
    "p_dc_w": (_as_float, "power"),
    "budget_match": (_as_int, "run"),
    "sweep_axis": (_as_str, "run"),
    "sweep_grid": (_as_float_list, "run"),
    "metrics": (_as_str_list, "run"),
    "variants": (_as_str_list, "run"),
    "trials": (_as_int, "run"),
    "seed": (_as_int, "run"),
}

_SYSTEM_RENAMES = {
    "k_users": "K",
    "rank_g": "g",
    "rank_f": "f",
    "elements": "L",
    "d_br_m": "d_br",
    "d_rg_m": "d_rg",
    "d_rf_m": "d_rf",
    "d_ro_m": "d_ro",
    "r_g_bpcu": "r_g",
    "r_f_bpcu": "r_f",
}
_DBM_KEYS = {"p_b_dbm": "p_b_w", "n_tn_dbm": "n_tn_w", "sigma2_dbm": "sigma2_w"}
_POWER_RENAMES = {"p_bs_w": "p_bs", "p_re_w": "p_re", "p_u_w": "p_u", "p_sw_w": "p_sw", "p_dc_w": "p_dc"}


@dataclass(frozen=True)
class RunSpec:
    """Everything one reproducible run needs."""

    name: str
    cfg: SystemConfig
    power: PowerModel
    sweep_axis: str = "p_b_dbm"
    sweep_grid: Sequence[float] = ()
    metrics: Sequence[str] = ("outage_f",)
    variants: Sequence[str] = ("aris_psic",)
    trials: int = 200_000
    seed: int = 1
    budget_match: bool = False
    raw_items: dict = field(default_factory=dict)


def parse_config(text: str) -> RunSpec:
    """Parse a key=value scenario; errors carry 1-based line numbers."""
    items = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _SCHEMA:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in items:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        caster, _target = _SCHEMA[key]
        try:
            items[key] = caster(value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from None
    return build_run_spec(items)


def build_run_spec(items: dict) -> RunSpec:
    sys_kw = {}
    pm_kw = {}
    run_kw = {}
    for key, value in items.items():
        _, target = _SCHEMA[key]
        if target == "system":
            if key in _DBM_KEYS:
                sys_kw[_DBM_KEYS[key]] = dbm_to_watts(value)
            else:
                sys_kw[_SYSTEM_RENAMES.get(key, key)] = value
        elif target == "power":
            pm_kw[_POWER_RENAMES.get(key, key)] = value
        else:
            run_kw[key] = value

    metrics = run_kw.get("metrics", ("outage_f",))
    for m in metrics:
        if m not in METRICS:
            raise ConfigError(f"unknown metric {m!r}; supported: {METRICS}")
    variants = run_kw.get("variants", ("aris_psic",))
    for v in variants:
        if v not in VARIANTS:
            raise ConfigError(f"unknown variant {v!r}; supported: {VARIANTS}")

    return RunSpec(
        name=run_kw.get("name", "scenario"),
        cfg=SystemConfig(**sys_kw),
        power=PowerModel(**pm_kw),
        sweep_axis=run_kw.get("sweep_axis", "p_b_dbm"),
        sweep_grid=run_kw.get("sweep_grid", ()),
        metrics=metrics,
        variants=variants,
        trials=run_kw.get("trials", 200_000),
        seed=run_kw.get("seed", 1),
        budget_match=bool(run_kw.get("budget_match", 0)),
        raw_items=dict(items),
    )


def load_config(path) -> RunSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def config_hash(spec: RunSpec) -> str:
    """sha256 of the canonicalized (sorted key=value) parsed config."""
    canon = "\n".join(f"{k}={spec.raw_items[k]!r}" for k in sorted(spec.raw_items))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def metric_needs_mc(metric: str) -> bool:
    return metric in _MC_METRICS
