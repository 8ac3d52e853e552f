"""Command-line interface.

    dflarray doa          --scenario s.json --out DIR
    dflarray sweep        --scenario s.json --out DIR [--axis target_y --values ... | --linspace A B N]
    dflarray array-factor --scenario s.json --out DIR
    dflarray validate     --scenario s.json

Exit status: 0 success, 2 invalid input, 3 numerical failure. Data go to
files in ``--out`` (default ``$DFLARRAY_OUT`` or ``./out``); diagnostics go
to stderr.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .array_processing import Hypothesis, array_factor
from .geometry import GeometryError, fresnel_radius
from .scenario import ScenarioError, SweepAxis, SweepSpec, evaluate, load_scenario, parse_sweep, run_sweep

log = logging.getLogger("dflarray")

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
OUT_ENV = "DFLARRAY_OUT"


def _out_dir(args) -> Path:
    out = Path(args.out or os.environ.get(OUT_ENV) or "out")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load(args):
    sc = load_scenario(args.scenario)
    if args.seed is not None:
        sc = dataclasses.replace(sc, seed=args.seed)
    return sc


def cmd_validate(args) -> int:
    sc = _load(args)
    lay = sc.layout
    print(f"wavelength_m={lay.wavelength!r}")
    print(f"antennas={lay.n_antennas} d0_m={lay.d0!r} da_m={lay.da!r} h_m={lay.h!r}")
    print(f"fresnel_radius_m={fresnel_radius(lay.wavelength, lay.d0)!r}")
    if sc.target is None:
        print("target=none")
    else:
        t = sc.target
        print(f"target ay_m={t.ay!r} az_m={t.az!r} x_m={t.x!r} y_m={t.y!r} theta_rad={t.theta!r}")
    print(f"gamma_grid points={sc.grid.size} sigma_n={sc.sigma_n!r} seed={sc.seed}")
    return EXIT_OK


def cmd_doa(args) -> int:
    from .report import write_curve_csv, write_estimate_json

    sc = _load(args)
    out = _out_dir(args)
    est, _ = evaluate(sc)
    write_curve_csv(out / "curve.csv", est.curve)
    write_estimate_json(out / "estimate.json", est)
    if args.plot:
        from .plotting import plot_power_curve

        label = None if sc.target is None else f"target ({sc.target.x:g}, {sc.target.y:g})"
        plot_power_curve(out / "curve.png", est.curve, est, label)
    log.info("gamma_hat = %.3f deg, A_T = %.4f dB", est.gamma_hat_deg, est.attenuation_db)
    return EXIT_OK


def _sweep_spec(args, sc) -> SweepSpec:
    if args.linspace is not None:
        lo, hi, n = args.linspace
        return parse_sweep({"axis": args.axis or "target_y", "linspace": [lo, hi, int(n)]})
    if args.values is not None:
        try:
            values = [float(v) for v in args.values.split(",") if v.strip()]
        except ValueError as exc:
            raise ScenarioError([f"--values: {exc}"]) from exc
        return parse_sweep({"axis": args.axis or "target_y", "values": values})
    if sc.sweep is None:
        raise ScenarioError(["sweep: no sweep block in the scenario and no --values/--linspace given"])
    if args.axis:
        return dataclasses.replace(sc.sweep, axis=SweepAxis(args.axis))
    return sc.sweep


def cmd_sweep(args) -> int:
    from .report import write_sweep_csv

    sc = _load(args)
    spec = _sweep_spec(args, sc)
    if sc.target is None:
        raise ScenarioError(["target: a sweep needs a target"], args.scenario)
    out = _out_dir(args)
    rows = run_sweep(sc, spec, threads=args.threads)
    write_sweep_csv(out / "sweep.csv", spec.axis, rows, sc.layout.n_antennas)
    if args.plot:
        from .plotting import plot_sweep

        plot_sweep(out / "sweep.png", spec.axis.column, rows)
    failed = [r for r in rows if r.error]
    for r in failed:
        log.error("%s=%r: %s", spec.axis.column, r.value, r.error)
    return EXIT_NUMERICAL if failed else EXIT_OK


def cmd_array_factor(args) -> int:
    from .report import write_factor_csv

    sc = _load(args)
    out = _out_dir(args)
    gammas = sc.grid.values()
    planar = array_factor(sc.layout, gammas, Hypothesis.PLANAR)
    nonplanar = array_factor(sc.layout, gammas, Hypothesis.NONPLANAR)
    write_factor_csv(out / "factor.csv", gammas, planar, nonplanar)
    if args.plot:
        from .plotting import plot_array_factor

        plot_array_factor(out / "factor.png", gammas, planar, nonplanar)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dflarray", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, outputs=True):
        p.add_argument("--scenario", required=True, type=Path, help="scenario JSON file")
        p.add_argument("--seed", type=int, default=None, help="override the scenario seed (u64)")
        if outputs:
            p.add_argument("--out", type=Path, default=None, help=f"output directory (default ${OUT_ENV} or ./out)")
            p.add_argument("--threads", type=int, default=1, help="worker threads")
            p.add_argument("--no-plot", dest="plot", action="store_false", help="skip PNG figures")
        else:
            p.add_argument("--out", type=Path, default=None, help=argparse.SUPPRESS)
            p.add_argument("--threads", type=int, default=1, help=argparse.SUPPRESS)

    p = sub.add_parser("doa", help="power-ratio curve and DoA estimate for one scenario")
    common(p)
    p.set_defaults(func=cmd_doa)

    p = sub.add_parser("sweep", help="estimate over a range of target positions or rotations")
    common(p)
    p.add_argument("--axis", choices=[a.value for a in SweepAxis], default=None)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--values", default=None, help="comma-separated values")
    g.add_argument("--linspace", nargs=3, type=float, metavar=("START", "STOP", "N"), default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("array-factor", help="planar and non-planar array factors")
    common(p)
    p.set_defaults(func=cmd_array_factor)

    p = sub.add_parser("validate", help="check a scenario file and print derived quantities")
    common(p, outputs=False)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_VALIDATION
    if args.seed is not None and not 0 <= args.seed < 2**64:
        print("error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        return args.func(args)
    except (ScenarioError, GeometryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ArithmeticError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
