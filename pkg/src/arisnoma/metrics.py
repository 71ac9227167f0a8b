"""System-level composites: throughput, power consumption, energy efficiency.

Delay-limited throughput weights the fixed target rates by outage
survival; delay-tolerant throughput sums ergodic rates. The consumption
model is kappa P_b + P_BS + L P_RE + P_out + per-user statics with the
surface output power taken in expectation, and the budget matcher solves
the equal-total-power identity used when comparing active against passive
surfaces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from . import analytic
from .errors import ConfigError, DomainError, InfeasibleBudgetError
from .system import SystemConfig

__all__ = [
    "PowerModel",
    "ThroughputReport",
    "throughput_delay_limited",
    "throughput_delay_tolerant",
    "throughput_delay_limited_oma",
    "total_power",
    "energy_efficiency",
    "match_power_budget",
    "budget_total_aris",
    "budget_total_pris",
]

DELAY_LIMITED = "delay_limited"
DELAY_TOLERANT = "delay_tolerant"


@dataclass(frozen=True)
class PowerModel:
    """Static consumption parameters (watts); placeholder defaults.

    nu is the transmit amplifier efficiency (kappa = 1/nu). p_sw and p_dc
    are the per-element switch/control and DC-bias draws that enter the
    budget identity; p_re is the per-element static loss counted in total
    consumption. Every output records the model used, since no source
    table pins these.
    """

    nu: float = 1.0
    p_bs: float = 0.0
    p_re: float = 0.0
    p_u: float = 0.0
    p_sw: float = 0.0
    p_dc: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.nu <= 1.0:
            raise ConfigError(f"amplifier efficiency must be in (0, 1], got {self.nu}")
        if min(self.p_bs, self.p_re, self.p_u, self.p_sw, self.p_dc) < 0.0:
            raise ConfigError("static powers must be >= 0")


@dataclass(frozen=True)
class ThroughputReport:
    mode: str
    value: float
    components: dict


def throughput_delay_limited(cfg: SystemConfig, ris: str = "aris", sic: str = "ipsic") -> ThroughputReport:
    """(1 - P_out_g) R_g + (1 - P_out_f) R_f at the fixed target rates."""
    p_g = analytic.outage_g(cfg, ris, sic)
    p_f = analytic.outage_f(cfg, ris)
    parts = {"g": (1.0 - p_g) * cfg.r_g, "f": (1.0 - p_f) * cfg.r_f}
    return ThroughputReport(DELAY_LIMITED, parts["g"] + parts["f"], parts)


def throughput_delay_limited_oma(cfg: SystemConfig, ris: str = "aris") -> ThroughputReport:
    """Orthogonal benchmark: outage-weighted rate log2(1 + gamma_th_o)."""
    r_o = math.log2(1.0 + cfg.gamma_th_o)
    p_o = analytic.outage_o(cfg, ris)
    return ThroughputReport(DELAY_LIMITED, (1.0 - p_o) * r_o, {"o": (1.0 - p_o) * r_o})


def throughput_delay_tolerant(cfg: SystemConfig, ris: str = "aris", sic: str = "ipsic") -> ThroughputReport:
    """Sum of the two users' ergodic rates."""
    parts = {
        "g": analytic.ergodic_rate_g(cfg, ris, sic),
        "f": analytic.ergodic_rate_f(cfg, ris),
    }
    return ThroughputReport(DELAY_TOLERANT, parts["g"] + parts["f"], parts)


def _surface_output_power(cfg: SystemConfig, p_b_w: Optional[float] = None) -> float:
    """Expected amplifier output: beta(P_b ||.h_br||^2 + N_tn L), zero when passive.

    Uses mean norms (L eta d_br^-alpha and L) so budgets are decided
    before any channel draw.
    """
    p_b = cfg.p_b_w if p_b_w is None else p_b_w
    if cfg.xi == 0:
        return 0.0
    mean_gain = cfg.L * cfg.eta * cfg.d_br ** (-cfg.alpha)
    return cfg.beta * (p_b * mean_gain + cfg.n_tn_w * cfg.L)


def total_power(cfg: SystemConfig, pm: PowerModel, n_served: int = 2) -> float:
    """kappa P_b + P_BS + L P_RE + P_out + n_served * P_U, in watts."""
    return (
        cfg.p_b_w / pm.nu
        + pm.p_bs
        + cfg.L * pm.p_re
        + _surface_output_power(cfg)
        + n_served * pm.p_u
    )


def energy_efficiency(
    cfg: SystemConfig,
    pm: PowerModel,
    mode: str = DELAY_LIMITED,
    ris: str = "aris",
    sic: str = "ipsic",
) -> float:
    """Throughput per watt of total consumption."""
    if mode == DELAY_LIMITED:
        rate = throughput_delay_limited(cfg, ris, sic).value
    elif mode == DELAY_TOLERANT:
        rate = throughput_delay_tolerant(cfg, ris, sic).value
    else:
        raise ConfigError(f"unknown throughput mode {mode!r}")
    p = total_power(cfg, pm)
    if p <= 0.0:
        raise DomainError("total power must be positive for an efficiency ratio")
    return rate / p


def budget_total_aris(p_bs: float, pm: PowerModel, cfg: SystemConfig) -> float:
    """Total consumption of the active surface under the budget identity."""
    amp = cfg.beta * (p_bs * cfg.L * cfg.eta * cfg.d_br ** (-cfg.alpha) + cfg.n_tn_w * cfg.L)
    return p_bs + amp + cfg.L * (pm.p_sw + pm.p_dc)


def budget_total_pris(p_bs: float, pm: PowerModel, cfg: SystemConfig) -> float:
    return p_bs + cfg.L * pm.p_sw


def match_power_budget(total_p_b: float, pm: PowerModel, cfg: SystemConfig):
    """Solve the equal-total-power split for both surface modes.

    Returns (p_bs_aris, p_bs_pris): transmit powers such that each mode
    consumes exactly total_p_b including its surface-side draw. Raises
    InfeasibleBudgetError naming the binding floor when statics exceed
    the budget.
    """
    if total_p_b <= 0.0:
        raise ConfigError("total power budget must be positive")
    amp_gain = cfg.beta * cfg.L * cfg.eta * cfg.d_br ** (-cfg.alpha)
    floor_aris = cfg.beta * cfg.n_tn_w * cfg.L + cfg.L * (pm.p_sw + pm.p_dc)
    if floor_aris >= total_p_b:
        raise InfeasibleBudgetError(
            f"active-surface statics {floor_aris:.6g} W (amplified thermal + L*(P_SW+P_DC)) "
            f"meet or exceed the {total_p_b:.6g} W budget"
        )
    p_bs_aris = (total_p_b - floor_aris) / (1.0 + amp_gain)
    floor_pris = cfg.L * pm.p_sw
    if floor_pris >= total_p_b:
        raise InfeasibleBudgetError(
            f"passive-surface statics {floor_pris:.6g} W (L*P_SW) meet or exceed "
            f"the {total_p_b:.6g} W budget"
        )
    p_bs_pris = total_p_b - floor_pris
    return p_bs_aris, p_bs_pris
