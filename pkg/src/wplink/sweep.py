"""Parameter sweeps over the rate/power operations, emitted as CSV tables.

Three canned modes cover the standard report views (rate vs power ratio,
rate vs error target under three power policies, optimal power vs harvested
power), and a custom mode sweeps any single parameter.  Output is plain
CSV: '#'-prefixed metadata lines (parameters, tool version; all
deterministic, no timestamps), one header row, one data row per sweep
point.  Floats are written with repr so a reader recovers them bit-exactly.
"""

from __future__ import annotations

import csv
import io
import math
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import DomainError
from .model import Blocklengths, SystemParams, energy_supply_probability
from .rate import (
    achievable_rate,
    asymptotic_rate,
    min_latency_blocklengths,
    optimal_power_asymptotic,
    optimal_power_finite,
)

SWEEP_VARIABLES = ("power_ratio", "epsilon", "p_e", "p_t", "m", "n")
MODES = ("fig1", "fig2", "fig3", "custom")

# Default axes for the canned modes: (variable, start, stop, points, scale).
MODE_AXES = {
    "fig1": ("power_ratio", 1e-4, 1e-1, 200, "log"),
    "fig2": ("epsilon", 2e-3, 0.5, 50, "log"),
    "fig3": ("p_e", 1e2, 1e4, 20, "log"),
}
# Fixed-parameter defaults per canned mode; flags/config override these.
MODE_FIXED = {
    "fig1": {"p_e": 1e2, "epsilon": 1e-2, "sigma2": 1.0},
    "fig2": {"p_e": 1e3, "p_t": 1.1554, "sigma2": 1.0},
    "fig3": {"epsilon": 0.05, "sigma2": 1.0},
}


@dataclass(frozen=True)
class SweepSpec:
    """One swept variable over [start, stop] with everything else pinned.

    fixed holds the non-swept system parameters (and m/n overrides where a
    mode uses them) keyed by their canonical names.
    """

    variable: str
    start: float
    stop: float
    points: int
    scale: str = "log"
    fixed: dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.variable not in SWEEP_VARIABLES:
            raise DomainError(f"unknown sweep variable {self.variable!r}")
        if not self.start < self.stop:
            raise DomainError(f"need start < stop, got [{self.start!r}, {self.stop!r}]")
        if not (isinstance(self.points, int) and self.points >= 2):
            raise DomainError(f"points must be an integer >= 2, got {self.points!r}")
        if self.scale not in ("linear", "log"):
            raise DomainError(f"scale must be 'linear' or 'log', got {self.scale!r}")
        if self.scale == "log" and not self.start > 0:
            raise DomainError("log scale requires start > 0")

    def grid(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class SweepTable:
    metadata: dict[str, str]
    header: list[str]
    rows: list[list[object]]


def _need(spec: SweepSpec, *names: str) -> list[float]:
    vals = []
    for name in names:
        if name not in spec.fixed:
            raise DomainError(f"sweep needs fixed parameter {name!r}")
        vals.append(float(spec.fixed[name]))
    return vals


def _metadata(spec: SweepSpec, mode: str) -> dict[str, str]:
    meta = {
        "tool": f"wplink {__version__}",
        "mode": mode,
        "variable": spec.variable,
        "scale": spec.scale,
        "start": repr(spec.start),
        "stop": repr(spec.stop),
        "points": str(spec.points),
        "seed": "n/a",
    }
    for key in sorted(spec.fixed):
        meta[f"fixed.{key}"] = repr(float(spec.fixed[key]))
    return meta


def _run_fig1(spec: SweepSpec) -> SweepTable:
    """Rate against the power ratio at fixed harvested power and error target."""
    p_e, eps, sigma2 = _need(spec, "p_e", "epsilon", "sigma2")
    header = ["a", "p_t", "m", "n", "feasible",
              "rate_nats", "rate_bits", "asym_rate_nats", "asym_rate_bits"]
    rows: list[list[object]] = []
    for a in spec.grid():
        a = float(a)
        p_t = a * p_e
        params = SystemParams(p_e=p_e, p_t=p_t, sigma2=sigma2, epsilon=eps)
        res = achievable_rate(params, min_latency_blocklengths(eps, a))
        asym = asymptotic_rate(params)
        rows.append([a, p_t, res.blocklengths.m, res.blocklengths.n, res.feasible,
                     res.rate_nats, res.rate_bits, asym, asym / math.log(2.0)])
    return SweepTable(_metadata(spec, "fig1"), header, rows)


def _run_fig2(spec: SweepSpec) -> SweepTable:
    """Rate against the error target under three transmit-power policies.

    Per grid point: the flag-supplied fixed power, the closed-form
    asymptotically optimal power, and the numerically optimal finite-regime
    power, each evaluated at its own minimum-latency frame, plus the
    large-blocklength rate at the fixed power for reference.
    """
    p_e, p_t_fixed, sigma2 = _need(spec, "p_e", "p_t", "sigma2")
    header = ["epsilon", "n",
              "pt_fixed", "m_fixed", "rate_fixed_nats", "rate_fixed_bits",
              "pt_asym", "m_asym", "rate_asym_power_nats", "rate_asym_power_bits",
              "pt_finite", "m_finite", "rate_finite_nats", "rate_finite_bits",
              "asym_rate_nats", "asym_rate_bits"]
    rows: list[list[object]] = []
    ln2 = math.log(2.0)
    for eps in spec.grid():
        eps = float(eps)
        fixed_params = SystemParams(p_e=p_e, p_t=p_t_fixed, sigma2=sigma2, epsilon=eps)
        r_fx = achievable_rate(fixed_params, min_latency_blocklengths(eps, p_t_fixed / p_e))
        p_as = optimal_power_asymptotic(eps, p_e, sigma2)
        r_as = achievable_rate(
            SystemParams(p_e=p_e, p_t=p_as, sigma2=sigma2, epsilon=eps),
            min_latency_blocklengths(eps, p_as / p_e),
        )
        p_fin, r_fin = optimal_power_finite(eps, p_e, sigma2)
        asym = asymptotic_rate(fixed_params)
        rows.append([eps, r_fx.blocklengths.n,
                     p_t_fixed, r_fx.blocklengths.m, r_fx.rate_nats, r_fx.rate_bits,
                     p_as, r_as.blocklengths.m, r_as.rate_nats, r_as.rate_bits,
                     p_fin, r_fin.blocklengths.m, r_fin.rate_nats, r_fin.rate_bits,
                     asym, asym / ln2])
    return SweepTable(_metadata(spec, "fig2"), header, rows)


def _run_fig3(spec: SweepSpec) -> SweepTable:
    """Optimal transmit power against the average harvested power."""
    eps, sigma2 = _need(spec, "epsilon", "sigma2")
    header = ["p_e", "pt_asymptotic", "pt_finite",
              "a_asymptotic", "a_finite", "n", "rate_finite_bits"]
    rows: list[list[object]] = []
    for p_e in spec.grid():
        p_e = float(p_e)
        p_as = optimal_power_asymptotic(eps, p_e, sigma2)
        p_fin, r_fin = optimal_power_finite(eps, p_e, sigma2)
        rows.append([p_e, p_as, p_fin, p_as / p_e, p_fin / p_e,
                     r_fin.blocklengths.n, r_fin.rate_bits])
    return SweepTable(_metadata(spec, "fig3"), header, rows)


def _run_custom(spec: SweepSpec) -> SweepTable:
    """Sweep any one system parameter or blocklength, everything else fixed.

    Blocklengths come from the fixed m/n values when both are known and from
    the minimum-latency selection otherwise.  The supply-probability column
    is blank where the closed form does not exist (m <= 2a).  Sweeping m or
    n names the first column swept_m / swept_n so every header stays unique
    and the CSV reader loses nothing.
    """
    fx = spec.fixed
    first = f"swept_{spec.variable}" if spec.variable in ("m", "n") else spec.variable
    header = [first, "m", "n", "feasible", "rate_nats", "rate_bits",
              "asym_rate_nats", "asym_rate_bits", "supply_prob"]
    rows: list[list[object]] = []
    for v in spec.grid():
        v = float(v)
        val = dict(fx)
        val[spec.variable] = v
        p_e = float(val.get("p_e", 0.0))
        sigma2 = float(val.get("sigma2", 1.0))
        eps = float(val.get("epsilon", 0.0))
        if "power_ratio" in val:
            if not p_e > 0:
                raise DomainError("power_ratio sweep needs fixed p_e")
            p_t = float(val["power_ratio"]) * p_e
        else:
            p_t = float(val.get("p_t", 0.0))
        params = SystemParams(p_e=p_e, p_t=p_t, sigma2=sigma2, epsilon=eps)
        if "m" in val and "n" in val:
            bl = Blocklengths(m=float(val["m"]), n=max(1, int(round(float(val["n"])))))
        elif "m" in val or "n" in val:
            raise DomainError("custom sweep needs both m and n when either is fixed")
        else:
            bl = min_latency_blocklengths(eps, params.a)
        asym = asymptotic_rate(params)
        if bl.m > 2.0 * params.a:
            res = achievable_rate(params, bl)
            supply = energy_supply_probability(bl.m, bl.n, params.a)
            cells = [res.feasible, res.rate_nats, res.rate_bits]
        else:
            # closed forms need m > 2a; report the point, leave them blank
            supply = None
            cells = [False, None, None]
        rows.append([v, bl.m, bl.n, *cells,
                     asym, asym / math.log(2.0), supply])
    return SweepTable(_metadata(spec, "custom"), header, rows)


_RUNNERS = {"fig1": _run_fig1, "fig2": _run_fig2, "fig3": _run_fig3, "custom": _run_custom}


def run_sweep(spec: SweepSpec, mode: str) -> SweepTable:
    if mode not in _RUNNERS:
        raise DomainError(f"unknown mode {mode!r}")
    return _RUNNERS[mode](spec)


def _format_cell(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_table(table: SweepTable) -> str:
    buf = io.StringIO()
    for key, value in table.metadata.items():
        buf.write(f"# {key}: {value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.header)
    for row in table.rows:
        writer.writerow([_format_cell(v) for v in row])
    return buf.getvalue()


def write_table(table: SweepTable, path: str) -> None:
    """Write the CSV atomically: a partial file is never left at `path`."""
    text = format_table(table)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _parse_cell(text: str) -> object:
    if text == "":
        return None
    if text == "true":
        return True
    if text == "false":
        return False
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def read_sweep_csv(path: str) -> tuple[dict[str, str], list[dict[str, object]]]:
    """Parse a sweep CSV back into (metadata, row dicts) with no data loss."""
    metadata: dict[str, str] = {}
    data_lines: list[str] = []
    with open(path, encoding="utf-8", newline="") as fh:
        for line in fh:
            if line.startswith("#"):
                key, _, value = line[1:].partition(":")
                metadata[key.strip()] = value.strip()
            else:
                data_lines.append(line)
    reader = csv.reader(data_lines)
    header = next(reader)
    rows = [dict(zip(header, map(_parse_cell, row), strict=True)) for row in reader]
    return metadata, rows
