"""Outage, rate, and efficiency evaluation for amplifying-surface downlinks.

Two independent routes — closed-form analysis and Monte Carlo simulation
over cascaded Nakagami-m fading — for active/passive reconfigurable-
surface downlinks with power-domain multiple access, hardware
impairments, and imperfect interference cancellation.
"""

from .channel import CascadeStats, FadingParams, OrderSpec, cascade_stats
from .errors import (
    ArisNomaError,
    ConfigError,
    DivergenceError,
    DomainError,
    InfeasibleBudgetError,
)
from .metrics import PowerModel
from .montecarlo import McEstimate, mc_ergodic_rate, mc_outage, mc_sweep
from .system import SystemConfig, dbm_to_watts, table1, watts_to_dbm

__version__ = "0.1.0"

__all__ = [
    "ArisNomaError",
    "CascadeStats",
    "ConfigError",
    "DivergenceError",
    "DomainError",
    "FadingParams",
    "InfeasibleBudgetError",
    "McEstimate",
    "OrderSpec",
    "PowerModel",
    "SystemConfig",
    "cascade_stats",
    "dbm_to_watts",
    "mc_ergodic_rate",
    "mc_outage",
    "mc_sweep",
    "table1",
    "watts_to_dbm",
    "__version__",
]
