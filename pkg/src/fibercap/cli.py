"""Command-line entry point: sweeps, pdf dumps, simulation, self-checks, plots."""

from __future__ import annotations

import argparse
import csv
import math
import sys

import numpy as np

from . import __version__, lpc, mnc, rpc
from .export import csv_text, emit_csv, emit_svg, parse_csv
from .params import TABLE1, dbm_to_watt, derive_discrete, load_physical
from .sweep import SweepConfig, parse_models, run_sweep
from .verify import run_verify


def _physical(args):
    return load_physical(args.config) if args.config else TABLE1


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="PATH", help="TOML file with the physical constants")
    p.add_argument("--out", metavar="PATH", help="output file (stdout when omitted)")
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")


def cmd_bounds(args) -> int:
    config = SweepConfig(
        p_min_dbm=args.pmin,
        p_max_dbm=args.pmax,
        step_db=args.step,
        models=parse_models(args.models),
        threads=args.threads,
        seed=args.seed,
        physical=_physical(args),
    )
    curve = run_sweep(config, cache_path=args.cache)
    if args.out is None:
        sys.stdout.write(csv_text(curve).replace("\r\n", "\n"))
    elif args.out.endswith(".svg"):
        emit_svg(curve, args.out)
    else:
        emit_csv(curve, args.out)
    n_flagged = sum(1 for f in curve.flags if f)
    if n_flagged:
        print(f"{n_flagged} row(s) carry flags; see the flags column", file=sys.stderr)
    return 0


def cmd_pdf(args) -> int:
    params = derive_discrete(_physical(args))
    r0 = math.sqrt(dbm_to_watt(args.power))
    sigma = math.sqrt(0.5 * params.noise_power_w)
    r = np.linspace(max(0.0, r0 - args.sigmas * sigma), r0 + args.sigmas * sigma, args.nr)
    theta = np.linspace(-math.pi, math.pi, args.ntheta, endpoint=False)
    p = mnc.MncPdfParams.from_channel(r0, params)
    f = mnc.conditional_pdf(r[:, None], theta[None, :], r0, 0.0, p)
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["r", "theta", "pdf"])
        for i, ri in enumerate(r):
            for j, tj in enumerate(theta):
                w.writerow([f"{ri:.9g}", f"{tj:.9g}", f"{f[i, j]:.9g}"])
    finally:
        if args.out:
            out.close()
    return 0


def _inputs(channel: str, p: float, n: int, params, rng_seed: int) -> np.ndarray:
    if channel == "rpc":
        _, law = rpc.lower_bound(p, params)
        return rpc.sample_symbols(law, n, seed=rng_seed)
    rng = np.random.default_rng(rng_seed)
    return math.sqrt(0.5 * p) * (rng.standard_normal(n) + 1j * rng.standard_normal(n))


def cmd_simulate(args) -> int:
    params = derive_discrete(_physical(args))
    p = dbm_to_watt(args.power)
    if args.constant:
        x = np.full(args.n, math.sqrt(p) + 0j)
    else:
        x = _inputs(args.channel, p, args.n, params, args.seed)
    noise_seed = args.seed + 1
    if args.channel == "rpc":
        y = rpc.simulate(x, params, seed=noise_seed)
    elif args.channel == "lpc":
        y = lpc.simulate(x, params, seed=noise_seed)
    else:
        y = mnc.simulate_ssf(x, args.segments, params, seed=noise_seed)
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["x_re", "x_im", "y_re", "y_im"])
        for a, b in zip(x, y):
            w.writerow([f"{a.real:.9g}", f"{a.imag:.9g}", f"{b.real:.9g}", f"{b.imag:.9g}"])
    finally:
        if args.out:
            out.close()
    if args.constant and args.channel == "mnc-ssf":
        tv = mnc.tv_distance(y, x[0], params)
        print(f"total variation against the conditional pdf: {tv:.4f}", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    results = run_verify("full" if args.full else "fast", _physical(args))
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 1 if failed else 0


def cmd_plot(args) -> int:
    curve = parse_csv(args.csv)
    out = args.out or (args.csv.rsplit(".", 1)[0] + ".svg")
    emit_svg(curve, out, title=args.title)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fibercap", description="Capacity bounds for zero-dispersion fiber channel models.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="sweep the bounds over a power grid and write CSV or SVG")
    _add_common(p)
    p.add_argument("--pmin", type=float, default=-35.0, help="lowest power in dBm (default -35)")
    p.add_argument("--pmax", type=float, default=50.0, help="highest power in dBm (default 50)")
    p.add_argument("--step", type=float, default=1.0, help="grid step in dB (default 1)")
    p.add_argument("--models", default="rpc-lb,rpc-ub,lpc", help="comma-separated model list")
    p.add_argument("--cache", metavar="PATH", help="JSON cache for the MNC columns")
    p.add_argument("--threads", type=int, default=1, help="worker threads over power points")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("pdf", help="dump the MNC conditional pdf on an (r, theta) grid")
    _add_common(p)
    p.add_argument("--power", type=float, default=-21.3, help="input power |x|^2 in dBm, with theta0 = 0")
    p.add_argument("--nr", type=int, default=64, help="radial grid points")
    p.add_argument("--ntheta", type=int, default=64, help="phase grid points")
    p.add_argument("--sigmas", type=float, default=6.0, help="radial half-width in noise standard deviations")
    p.set_defaults(func=cmd_pdf)

    p = sub.add_parser("simulate", help="pass random inputs through one of the channels")
    _add_common(p)
    p.add_argument("--channel", choices=("rpc", "lpc", "mnc-ssf"), default="rpc")
    p.add_argument("--power", type=float, default=0.0, help="average input power in dBm")
    p.add_argument("-n", type=int, default=10_000, help="number of samples")
    p.add_argument("--segments", type=int, default=2000, help="split-step segments (mnc-ssf)")
    p.add_argument("--constant", action="store_true", help="send the fixed symbol sqrt(P) instead of random inputs")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run the self-check suite; exit status 1 on any failure")
    p.add_argument("--config", metavar="PATH", help="TOML file with the physical constants")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--fast", action="store_true", help="skip the long oracles (default)")
    g.add_argument("--full", action="store_true", help="include the split-step and Monte Carlo oracles")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("plot", help="render a bounds CSV as an SVG line chart")
    p.add_argument("csv", help="CSV written by the bounds command")
    p.add_argument("--out", metavar="PATH", help="SVG path (default: CSV path with .svg)")
    p.add_argument("--title", default="Capacity bounds")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"fibercap: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
