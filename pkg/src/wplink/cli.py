"""Command-line interface.

Subcommands map one-to-one onto the library's public surface: supply-prob
and mc for the energy model (closed form and simulation), rate for a single
achievable-rate evaluation, sweep for CSV tables (optionally with a plot),
and optimal-power for the transmit-power optimizers.

Exit codes: 0 success, 2 bad input (domain or usage errors), 1 internal
failure.  A flat key=value config file can supply defaults for any flag;
values given on the command line win.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from typing import Callable

from . import __version__
from .errors import DomainError, WplinkError
from .model import Blocklengths, SystemParams, energy_supply_probability
from .montecarlo import McConfig, simulate_prefix_constraints, simulate_supply_probability
from .rate import (
    achievable_rate,
    asymptotic_rate,
    min_latency_blocklengths,
    optimal_power_asymptotic,
    optimal_power_finite,
)
from .sweep import (
    MODE_AXES,
    MODE_FIXED,
    MODES,
    SWEEP_VARIABLES,
    SweepSpec,
    format_table,
    run_sweep,
    write_table,
)

_PROB_FMT = "{:.12f}"
_FLOAT_FMT = "{:.12g}"


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


# Config keys mirror flag names (dashes and underscores both accepted).
_CONFIG_CASTS: dict[str, Callable[[str], object]] = {
    "pe": float,
    "pt": float,
    "a": float,
    "eps": float,
    "sigma2": float,
    "m": float,
    "n": int,
    "min_latency": _parse_bool,
    "samples": int,
    "seed": int,
    "chunk_size": int,
    "prefix": _parse_bool,
    "out": str,
    "mode": str,
    "variable": str,
    "start": float,
    "stop": float,
    "points": int,
    "scale": str,
    "plot": _parse_bool,
    "finite": _parse_bool,
}


def load_config(path: str) -> dict[str, object]:
    """Read a flat key=value file; blank lines and # comments are skipped."""
    values: dict[str, object] = {}
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise DomainError(f"cannot read config {path!r}: {exc}") from None
    with fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise DomainError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key = key.strip().replace("-", "_")
            if key not in _CONFIG_CASTS:
                raise DomainError(f"{path}:{lineno}: unknown config key {key!r}")
            try:
                values[key] = _CONFIG_CASTS[key](value.strip())
            except ValueError as exc:
                raise DomainError(f"{path}:{lineno}: bad value for {key}: {exc}") from None
    return values


def _require(args: argparse.Namespace, *names: str) -> None:
    missing = [f"--{name.replace('_', '-')}" for name in names if getattr(args, name) is None]
    if missing:
        raise DomainError(f"{args.command}: missing required option(s): {', '.join(missing)}")


def _power_ratio(args: argparse.Namespace) -> float:
    if args.a is not None:
        return args.a
    if args.pe is not None and args.pt is not None:
        if not args.pe > 0:
            raise DomainError(f"pe must be > 0, got {args.pe!r}")
        return args.pt / args.pe
    raise DomainError(f"{args.command}: give --a, or both --pe and --pt")


def _fmt_count(value: float) -> str:
    # m is mathematically real but usually a whole number of channel uses
    return str(int(value)) if float(value).is_integer() else repr(float(value))


def _cmd_supply_prob(args: argparse.Namespace) -> int:
    _require(args, "m", "n")
    a = _power_ratio(args)
    if not args.m > 2.0 * a:
        raise DomainError(
            f"m <= 2a: closed form invalid (requires m > 2a, got m={args.m!r}, a={a!r}); "
            f"use the mc subcommand to estimate this point by simulation"
        )
    print(_PROB_FMT.format(energy_supply_probability(args.m, args.n, a)))
    return 0


def _cmd_rate(args: argparse.Namespace) -> int:
    _require(args, "eps", "pe", "pt")
    params = SystemParams(p_e=args.pe, p_t=args.pt, sigma2=args.sigma2, epsilon=args.eps)
    if args.min_latency:
        bl = min_latency_blocklengths(args.eps, params.a)
    elif args.m is not None and args.n is not None:
        bl = Blocklengths(m=args.m, n=args.n)
    else:
        raise DomainError("rate: give --min-latency, or both --m and --n")
    res = achievable_rate(params, bl)
    asym_bits = asymptotic_rate(params) / math.log(2.0)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["m", "n", "feasible", "rate_nats", "rate_bits", "asymptotic_rate_bits"])
    writer.writerow(
        [
            _fmt_count(bl.m),
            str(bl.n),
            "true" if res.feasible else "false",
            repr(res.rate_nats),
            repr(res.rate_bits),
            repr(asym_bits),
        ]
    )
    return 0


def _cmd_mc(args: argparse.Namespace) -> int:
    _require(args, "m", "n", "pe", "pt")
    kwargs = {"samples": args.samples, "seed": args.seed}
    if args.chunk_size is not None:
        kwargs["chunk_size"] = args.chunk_size
    cfg = McConfig(**kwargs)
    simulate = simulate_prefix_constraints if args.prefix else simulate_supply_probability
    est = simulate(args.m, args.n, args.pe, args.pt, cfg)
    print(f"p_hat: {_PROB_FMT.format(est.p_hat)}")
    print(f"std_err: {_FLOAT_FMT.format(est.std_err)}")
    print(f"samples: {est.samples}")
    a = args.pt / args.pe
    if args.m > 2.0 * a:
        p_cf = energy_supply_probability(args.m, args.n, a)
        se_null = math.sqrt(p_cf * (1.0 - p_cf) / est.samples)
        if se_null > 0.0:
            z = (est.p_hat - p_cf) / se_null
        else:
            z = 0.0 if est.p_hat == p_cf else math.copysign(math.inf, est.p_hat - p_cf)
        print(f"closed-form: {_PROB_FMT.format(p_cf)}")
        print(f"z: {_FLOAT_FMT.format(z)}")
    else:
        print("closed-form: n/a (m <= 2a)")
    return 0


def _cmd_optimal_power(args: argparse.Namespace) -> int:
    _require(args, "eps", "pe")
    # compute everything before printing so a failed search emits no partial answer
    p_asym = optimal_power_asymptotic(args.eps, args.pe, args.sigma2)
    p_fin = None
    if args.finite:
        p_fin, _ = optimal_power_finite(args.eps, args.pe, args.sigma2)
    print(_FLOAT_FMT.format(p_asym))
    if p_fin is not None:
        print(f"finite: {_FLOAT_FMT.format(p_fin)}")
    return 0


def _sweep_spec(args: argparse.Namespace) -> SweepSpec:
    if args.mode == "custom":
        _require(args, "variable", "start", "stop", "points")
        axis = (args.variable, args.start, args.stop, args.points, args.scale or "log")
    else:
        default = MODE_AXES[args.mode]
        axis = (
            args.variable if args.variable is not None else default[0],
            args.start if args.start is not None else default[1],
            args.stop if args.stop is not None else default[2],
            args.points if args.points is not None else default[3],
            args.scale if args.scale is not None else default[4],
        )
    fixed = dict(MODE_FIXED.get(args.mode, {}))
    for key, value in (
        ("p_e", args.pe),
        ("p_t", args.pt),
        ("epsilon", args.eps),
        ("sigma2", args.sigma2),
        ("m", args.m),
        ("n", args.n),
        ("power_ratio", args.a),
    ):
        if value is not None:
            fixed[key] = float(value)
    fixed.pop(axis[0], None)  # the swept variable is never also fixed
    return SweepSpec(
        variable=axis[0], start=axis[1], stop=axis[2], points=axis[3], scale=axis[4], fixed=fixed
    )


def _cmd_sweep(args: argparse.Namespace) -> int:
    _require(args, "mode")
    if args.plot and args.out is None:
        raise DomainError("sweep: --plot requires --out")
    table = run_sweep(_sweep_spec(args), args.mode)
    if args.out is None:
        sys.stdout.write(format_table(table))
        return 0
    write_table(table, args.out)
    if args.plot:
        from .plotting import render_sweep

        render_sweep(table, args.mode, os.path.splitext(args.out)[0] + ".png")
    return 0


def build_parser(defaults: dict[str, object] | None = None) -> argparse.ArgumentParser:
    """Construct the CLI parser, seeding flag defaults from a config mapping.

    Defaults are installed on every subparser: subcommands parse into a
    fresh namespace, so top-level set_defaults would not reach them.
    """
    parser = argparse.ArgumentParser(
        prog="wplink",
        description="Finite-blocklength performance of a wireless-powered link.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--config", metavar="PATH", help="flat key=value file supplying flag defaults"
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    sp = sub.add_parser("supply-prob", help="closed-form energy supply probability")
    sp.add_argument("--m", type=float, help="harvest blocklength (channel uses)")
    sp.add_argument("--n", type=float, help="data blocklength (channel uses)")
    sp.add_argument("--a", type=float, help="power ratio p_t / p_e")
    sp.add_argument("--pe", type=float, help="average harvested power")
    sp.add_argument("--pt", type=float, help="transmit power")
    sp.set_defaults(func=_cmd_supply_prob)

    rp = sub.add_parser("rate", help="achievable rate at one operating point")
    rp.add_argument("--eps", type=float, help="target error probability, in (0, 1)")
    rp.add_argument("--pe", type=float, help="average harvested power")
    rp.add_argument("--pt", type=float, help="transmit power")
    rp.add_argument("--sigma2", type=float, default=1.0, help="noise power (default 1.0)")
    rp.add_argument("--m", type=float, help="harvest blocklength")
    rp.add_argument("--n", type=int, help="data blocklength")
    rp.add_argument(
        "--min-latency",
        action="store_true",
        dest="min_latency",
        help="derive the smallest admissible (m, n) instead of taking --m/--n",
    )
    rp.set_defaults(func=_cmd_rate)

    mp = sub.add_parser("mc", help="Monte Carlo estimate of the supply probability")
    mp.add_argument("--m", type=float, help="harvest blocklength")
    mp.add_argument("--n", type=int, help="data blocklength")
    mp.add_argument("--pe", type=float, help="average harvested power")
    mp.add_argument("--pt", type=float, help="transmit power")
    mp.add_argument("--samples", type=int, default=100000, help="trial count (default 100000)")
    mp.add_argument("--seed", type=int, default=0, help="stream seed (default 0)")
    mp.add_argument("--chunk-size", type=int, dest="chunk_size", help="trials per chunk")
    mp.add_argument(
        "--prefix",
        action="store_true",
        help="require every intermediate energy constraint, not just the final one",
    )
    mp.set_defaults(func=_cmd_mc)

    op = sub.add_parser("optimal-power", help="rate-maximizing transmit power")
    op.add_argument("--eps", type=float, help="target error probability, in (0, 1)")
    op.add_argument("--pe", type=float, help="average harvested power")
    op.add_argument("--sigma2", type=float, default=1.0, help="noise power (default 1.0)")
    op.add_argument(
        "--finite",
        action="store_true",
        help="also search the finite-blocklength regime numerically",
    )
    op.set_defaults(func=_cmd_optimal_power)

    wp = sub.add_parser("sweep", help="tabulate a parameter sweep as CSV")
    wp.add_argument("--mode", choices=MODES, help="canned sweep or 'custom'")
    wp.add_argument("--variable", choices=SWEEP_VARIABLES, help="swept variable")
    wp.add_argument("--start", type=float, help="first grid value")
    wp.add_argument("--stop", type=float, help="last grid value")
    wp.add_argument("--points", type=int, help="grid size")
    wp.add_argument("--scale", choices=("log", "linear"), help="grid spacing")
    wp.add_argument("--pe", type=float, help="fixed harvested power")
    wp.add_argument("--pt", type=float, help="fixed transmit power")
    wp.add_argument("--a", type=float, help="fixed power ratio")
    wp.add_argument("--eps", type=float, help="fixed error target")
    wp.add_argument("--sigma2", type=float, help="fixed noise power")
    wp.add_argument("--m", type=float, help="fixed harvest blocklength")
    wp.add_argument("--n", type=int, help="fixed data blocklength")
    wp.add_argument("--out", metavar="PATH", help="write CSV here instead of stdout")
    wp.add_argument(
        "--plot",
        action="store_true",
        help="also render a PNG next to --out (same name, .png suffix)",
    )
    wp.set_defaults(func=_cmd_sweep)

    # accept --config after the subcommand too; the pre-parser reads it
    for p in (sp, rp, mp, op, wp):
        p.add_argument("--config", metavar="PATH", help=argparse.SUPPRESS)
        if defaults:
            p.set_defaults(**defaults)

    return parser


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]

    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)

    try:
        defaults = load_config(known.config) if known.config is not None else None
        parser = build_parser(defaults)
        args = parser.parse_args(argv)
        if getattr(args, "func", None) is None:
            parser.print_usage(sys.stderr)
            print("wplink: error: a COMMAND is required", file=sys.stderr)
            return 2
        return args.func(args)
    except DomainError as exc:
        print(f"wplink: error: {exc}", file=sys.stderr)
        return 2
    except WplinkError as exc:
        print(f"wplink: internal error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - last-resort CLI guard
        print(f"wplink: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
