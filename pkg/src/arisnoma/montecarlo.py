"""Simulation oracle: outage and rate estimates straight from channel draws.

The sampling protocol draws K i.i.d. small-scale cascade sums with the
metric user's hop shape, sorts them ascending, selects the user's rank,
and applies that user's large-scale factor — mirroring the ordering the
analysis assumes while keeping user-specific distances outside the
ordered variable. The orthogonal benchmark user is an unsorted
single-cascade draw. Residual-interference samples are drawn for every
trial so that cancellation variants share common random numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import analytic
from .channel import FadingParams, sample_cascade_set
from .errors import ConfigError
from .system import (
    RIS_NOISE_PER_TRIAL,
    SystemConfig,
    derive_targets,
    sinr_f,
    sinr_g,
    sinr_g_to_f,
    sinr_o,
)

__all__ = ["McEstimate", "SweepPoint", "SweepResult", "mc_outage", "mc_ergodic_rate", "mc_sweep", "apply_axis"]

MIN_TRIALS = 10_000
SWEEP_AXES = ("p_b_dbm", "L", "beta", "m", "kappa", "d_br_m")


@dataclass(frozen=True)
class McEstimate:
    value: float
    std_error: float
    trials: int
    seed: int


@dataclass(frozen=True)
class SweepPoint:
    axis_value: float
    analytic_value: Optional[float]
    mc: Optional[McEstimate]


@dataclass(frozen=True)
class SweepResult:
    axis: str
    user: str
    metric: str
    variant: str
    points: Sequence[SweepPoint]
    meta: dict = field(default_factory=dict)


def _variant_config(cfg: SystemConfig, ris: str, sic: str) -> SystemConfig:
    """Pin the switches the variant dictates (passive: xi=0, beta=1)."""
    kw = {"varpi": 1 if sic == "ipsic" else 0}
    if ris == "pris":
        kw.update(xi=0, beta=1.0)
    elif ris != "aris":
        raise ConfigError(f"unknown surface variant {ris!r}")
    return cfg.replace(**kw)


def _iter_user_draws(cfg: SystemConfig, user: str, trials: int, seed: int):
    """Yield (y_rank, resid, ru_norm_sq or None) chunks for one user.

    The per-trial surface-noise norm, when enabled, is the one belonging
    to the rank-selected draw, so it stays correlated with the served
    cascade.
    """
    if user in ("g", "f"):
        K, rank = cfg.K, (cfg.g if user == "g" else cfg.f)
    elif user == "o":
        K, rank = 1, 1
    else:
        raise ConfigError(f"unknown user {user!r}")
    fp = FadingParams(cfg.m_r, cfg.m_u(user), cfg.L)
    per_trial = cfg.ris_noise_model == RIS_NOISE_PER_TRIAL
    # Keep chunk memory bounded for large K*L grids.
    chunk = max(2048, min(65536, int(8e6 / max(1, K * cfg.L))))
    for draw in sample_cascade_set([fp] * K, seed, trials, m_i=cfg.m_i_eff, chunk=chunk):
        if K == 1:
            y = draw.y[:, 0]
            norm = draw.ru_norm_sq[:, 0] if per_trial else None
        else:
            order = np.argsort(draw.y, axis=1)
            sel = order[:, rank - 1]
            rows = np.arange(draw.y.shape[0])
            y = draw.y[rows, sel]
            norm = draw.ru_norm_sq[rows, sel] if per_trial else None
        yield y, draw.resid, norm


def _outage_indicator(cfg: SystemConfig, user: str, y, resid, norm) -> np.ndarray:
    gth_g, gth_f = derive_targets(cfg)
    if user == "g":
        # Outage unless the far symbol is decodable and the own symbol is.
        s1 = sinr_g_to_f(cfg, y, norm).sinr
        s2 = sinr_g(cfg, y, resid, norm).sinr
        return ~((s1 >= gth_f) & (s2 >= gth_g))
    if user == "f":
        return sinr_f(cfg, y, norm).sinr < gth_f
    return sinr_o(cfg, y, norm).sinr < cfg.gamma_th_o


def mc_outage(
    cfg: SystemConfig,
    user: str,
    ris: str = "aris",
    sic: str = "ipsic",
    trials: int = 200_000,
    seed: int = 1,
) -> McEstimate:
    """Outage probability estimate with its Bernoulli standard error."""
    if trials < MIN_TRIALS:
        raise ConfigError(f"trials must be >= {MIN_TRIALS}")
    run = _variant_config(cfg, ris, sic)
    hits = 0
    for y, resid, norm in _iter_user_draws(run, user, trials, seed):
        hits += int(np.count_nonzero(_outage_indicator(run, user, y, resid, norm)))
    p = hits / trials
    se = math.sqrt(p * (1.0 - p) / trials)
    return McEstimate(value=p, std_error=se, trials=trials, seed=seed)


def mc_ergodic_rate(
    cfg: SystemConfig,
    user: str,
    ris: str = "aris",
    sic: str = "ipsic",
    trials: int = 200_000,
    seed: int = 1,
) -> McEstimate:
    """Mean of log2(1 + SINR) with its sample standard error."""
    if trials < MIN_TRIALS:
        raise ConfigError(f"trials must be >= {MIN_TRIALS}")
    run = _variant_config(cfg, ris, sic)
    total = 0.0
    total_sq = 0.0
    for y, resid, norm in _iter_user_draws(run, user, trials, seed):
        if user == "g":
            s = sinr_g(run, y, resid, norm).sinr
        elif user == "f":
            s = sinr_f(run, y, norm).sinr
        else:
            s = sinr_o(run, y, norm).sinr
        r = np.log2(1.0 + s)
        total += float(r.sum())
        total_sq += float((r * r).sum())
    mean = total / trials
    var = max(total_sq / trials - mean * mean, 0.0)
    se = math.sqrt(var / trials)
    return McEstimate(value=mean, std_error=se, trials=trials, seed=seed)


def apply_axis(cfg: SystemConfig, axis: str, value) -> SystemConfig:
    """Return the config with one sweep axis applied."""
    if axis == "p_b_dbm":
        return cfg.replace(p_b_w=10.0 ** (float(value) / 10.0) * 1e-3)
    if axis == "L":
        return cfg.replace(L=int(value))
    if axis == "beta":
        return cfg.replace(beta=float(value))
    if axis == "m":
        v = float(value)
        return cfg.replace(m_r=v, m_g=v, m_f=v, m_o=v)
    if axis == "kappa":
        v = float(value)
        return cfg.replace(kappa_b=v, kappa_g=v, kappa_f=v, kappa_o=v)
    if axis == "d_br_m":
        return cfg.replace(d_br=float(value))
    raise ConfigError(f"unknown sweep axis {axis!r}; supported: {SWEEP_AXES}")


def _analytic_value(cfg: SystemConfig, user: str, metric: str, ris: str, sic: str) -> float:
    if metric == "outage":
        return analytic.outage(cfg, user, ris, sic)
    if metric == "rate":
        return analytic.ergodic_rate(cfg, user, ris, sic)
    raise ConfigError(f"unknown sweep metric {metric!r}")


def mc_sweep(
    cfg: SystemConfig,
    axis: str,
    grid: Sequence[float],
    user: str,
    metric: str = "outage",
    ris: str = "aris",
    sic: str = "ipsic",
    trials: int = 200_000,
    seed: int = 1,
    analytic_values: bool = True,
    budget=None,
) -> SweepResult:
    """Estimate one metric over a parameter grid, paired with closed forms.

    Each grid point consumes an independent sub-stream keyed by
    (seed, point index), so estimates do not depend on evaluation order.
    budget, when given, is a (PowerModel, total_p_b_w) pair: the per-point
    transmit power is then solved from the equal-total-power identity
    before either route is evaluated.
    """
    if len(grid) == 0:
        raise ConfigError("sweep grid must be nonempty")
    if list(grid) != sorted(float(v) for v in grid):
        raise ConfigError("sweep grid must be increasing")
    if axis not in SWEEP_AXES:
        raise ConfigError(f"unknown sweep axis {axis!r}; supported: {SWEEP_AXES}")
    points = []
    for idx, value in enumerate(grid):
        cfg_i = apply_axis(cfg, axis, value)
        if budget is not None:
            from .metrics import match_power_budget

            pm, total = budget
            p_aris, p_pris = match_power_budget(total, pm, cfg_i)
            cfg_i = cfg_i.replace(p_b_w=p_aris if ris == "aris" else p_pris)
        ana = _analytic_value(cfg_i, user, metric, ris, sic) if analytic_values else None
        point_seed = (int(seed) << 20) ^ (idx + 1)
        if metric == "outage":
            est = mc_outage(cfg_i, user, ris, sic, trials, point_seed)
        else:
            est = mc_ergodic_rate(cfg_i, user, ris, sic, trials, point_seed)
        points.append(SweepPoint(float(value), ana, est))
    return SweepResult(
        axis=axis,
        user=user,
        metric=metric,
        variant=f"{ris}_{sic}" if user == "g" else ris,
        points=points,
        meta={"quad_u": cfg.quad_u, "quad_n": cfg.quad_n, "trials": trials, "seed": seed},
    )
