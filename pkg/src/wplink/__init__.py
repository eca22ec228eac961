"""Finite-blocklength analysis of a wireless-powered communication link.

The library models a two-phase frame (m channel uses of downlink energy
transfer, n of uplink data) over AWGN channels and provides:

- closed-form energy supply probability and its large-frame behavior
- the finite-blocklength achievable rate with its feasibility region
- minimum-latency frame selection and transmit-power optimization
- Monte Carlo estimators that validate the closed forms from raw samples
- parameter sweep tables, CSV output and optional plots, plus a CLI
"""

__version__ = "0.1.0"

from .errors import ConvergenceError, DomainError, OptimizationError, WplinkError
from .model import (
    Blocklengths,
    SystemParams,
    asymptotic_supply_limit,
    energy_outage_probability,
    energy_supply_probability,
    min_power_ratio_for_supply,
)
from .montecarlo import (
    McConfig,
    McEstimate,
    simulate_prefix_constraints,
    simulate_supply_probability,
)
from .numerics import lambert_w0, maximize_scalar
from .rate import (
    FeasibleRegion,
    RateResult,
    achievable_rate,
    asymptotic_rate,
    capacity_awgn,
    capacity_loss_factor,
    feasible_region,
    min_latency_blocklengths,
    optimal_power_asymptotic,
    optimal_power_finite,
)
from .sweep import SweepSpec, SweepTable, format_table, read_sweep_csv, run_sweep, write_table

__all__ = [
    "Blocklengths",
    "ConvergenceError",
    "DomainError",
    "FeasibleRegion",
    "McConfig",
    "McEstimate",
    "OptimizationError",
    "RateResult",
    "SweepSpec",
    "SweepTable",
    "SystemParams",
    "WplinkError",
    "achievable_rate",
    "asymptotic_rate",
    "asymptotic_supply_limit",
    "capacity_awgn",
    "capacity_loss_factor",
    "energy_outage_probability",
    "energy_supply_probability",
    "feasible_region",
    "format_table",
    "lambert_w0",
    "maximize_scalar",
    "min_latency_blocklengths",
    "min_power_ratio_for_supply",
    "optimal_power_asymptotic",
    "optimal_power_finite",
    "read_sweep_csv",
    "run_sweep",
    "simulate_prefix_constraints",
    "simulate_supply_probability",
    "write_table",
    "__version__",
]
