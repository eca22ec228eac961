"""Render sweep tables to PNG figures.

Used by the report path of the CLI: `sweep --plot` writes the figure next
to the CSV so a sweep run leaves both the data and its picture.  Matplotlib
is imported lazily with the Agg backend, so headless environments work and
plain data runs never pay the import.
"""

from __future__ import annotations

from .errors import DomainError
from .sweep import SweepTable


def _column(table: SweepTable, name: str) -> list[float]:
    i = table.header.index(name)
    return [float(row[i]) for row in table.rows]


def render_sweep(table: SweepTable, mode: str, path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.0), layout="constrained")
    scale = table.metadata.get("scale", "log")
    xscale = "log" if scale == "log" else "linear"

    if mode == "fig1":
        ax.plot(_column(table, "a"), _column(table, "rate_bits"))
        ax.set_xscale(xscale)
        ax.set_xlabel("power ratio a")
        ax.set_ylabel("rate (bits/channel use)")
        ax.set_title("Achievable rate vs power ratio")
    elif mode == "fig2":
        eps = _column(table, "epsilon")
        ax.plot(eps, _column(table, "rate_finite_bits"), label="optimal power")
        ax.plot(eps, _column(table, "rate_asym_power_bits"), "--",
                label="asymptotically optimal power")
        ax.plot(eps, _column(table, "rate_fixed_bits"), label="fixed power")
        ax.plot(eps, _column(table, "asym_rate_bits"), ":",
                label="large-blocklength rate, fixed power")
        ax.set_xscale(xscale)
        ax.set_xlabel("target error probability")
        ax.set_ylabel("rate (bits/channel use)")
        ax.set_title("Achievable rate vs error target")
        ax.legend()
    elif mode == "fig3":
        pe = _column(table, "p_e")
        ax.plot(pe, _column(table, "pt_finite"), label="finite-regime optimum")
        ax.plot(pe, _column(table, "pt_asymptotic"), "--", label="asymptotic optimum")
        ax.set_xscale(xscale)
        ax.set_yscale("log")
        ax.set_xlabel("average harvested power")
        ax.set_ylabel("optimal transmit power")
        ax.set_title("Optimal transmit power vs harvested power")
        ax.legend()
    elif mode == "custom":
        variable = table.metadata.get("variable", table.header[0])
        ax.plot(_column(table, variable), _column(table, "rate_bits"))
        ax.set_xscale(xscale)
        ax.set_xlabel(variable)
        ax.set_ylabel("rate (bits/channel use)")
        ax.set_title(f"Achievable rate vs {variable}")
    else:
        plt.close(fig)
        raise DomainError(f"unknown mode {mode!r}")

    ax.grid(True, which="both", alpha=0.3)
    fig.savefig(path, dpi=120)
    plt.close(fig)
