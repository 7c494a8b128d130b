"""Command line entry point.

    oqs-interplay simulate CONFIG [--csv PATH] [--plot PATH] [--quadrature NT,NP]
    oqs-interplay reproduce-figures --out-dir DIR [--quadrature NT,NP] [--jobs N]

Exit status: 0 on success, 1 for configuration errors, 2 for numerical or
validation failures (including a violated sign check in reproduce-figures).
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from ..records import corr
from .config import ConfigError, RunSpec, parse_config, parse_quadrature
from .figures import figure_specs
from .output import csv_text, write_csv, write_plot
from .run import SimulationError, run

log = logging.getLogger("oqs_interplay")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="oqs-interplay", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one configuration file")
    sim.add_argument("config", type=Path)
    sim.add_argument("--csv", type=Path, help="CSV output path (default: config 'output' key, else stdout)")
    sim.add_argument("--plot", type=Path, help="SVG plot output path")
    sim.add_argument("--quadrature", help="override Wigner quadrature as NTHETA,NPHI")

    rep = sub.add_parser("reproduce-figures", help="run the five reference parameter sets")
    rep.add_argument("--out-dir", type=Path, required=True)
    rep.add_argument("--quadrature", help="override Wigner quadrature as NTHETA,NPHI")
    rep.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    rep.add_argument("--no-plots", action="store_true")
    return p


def _with_quadrature(spec: RunSpec, text: str | None) -> RunSpec:
    if text is None:
        return spec
    return dataclasses.replace(spec, quadrature=parse_quadrature(text))


def _simulate(args) -> int:
    try:
        spec = _with_quadrature(parse_config(args.config.read_text()), args.quadrature)
    except OSError as e:
        log.error("cannot read config: %s", e)
        return EXIT_CONFIG
    out = run(spec)
    csv_path = args.csv or (Path(spec.output_path) if spec.output_path else None)
    if csv_path is None:
        sys.stdout.write(csv_text(out))
    else:
        write_csv(out, csv_path)
    plot_path = args.plot
    if plot_path is None and spec.emit_plot:
        plot_path = (csv_path or args.config).with_suffix(".svg")
    if plot_path is not None:
        write_plot(out, plot_path)
    return EXIT_OK


def _figure_job(item):
    name, spec, out_dir, plots = item
    out = run(spec)
    write_csv(out, out_dir / f"{name}.csv")
    if plots:
        write_plot(out, out_dir / f"{name}.svg")
    return name, corr(out.series("delta"), out.series("entropy")), corr(out.series("sigma"), out.series("ergotropy"))


def _reproduce(args) -> int:
    specs = {k: _with_quadrature(v, args.quadrature) for k, v in figure_specs().items()}
    items = [(name, spec, args.out_dir, not args.no_plots) for name, spec in specs.items()]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_figure_job, items))
    else:
        results = [_figure_job(it) for it in items]
    ok = True
    print(f"{'figure':<20} {'corr(delta,S)':>14} {'corr(Sigma,W)':>14}  sign check")
    for name, c1, c2 in results:
        passed = c1 < 0 and c2 < 0
        ok &= passed
        print(f"{name:<20} {c1:>14.6f} {c2:>14.6f}  {'PASS' if passed else 'FAIL'}")
    return EXIT_OK if ok else EXIT_NUMERIC


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = _parser().parse_args(argv)
    try:
        if args.command == "simulate":
            return _simulate(args)
        return _reproduce(args)
    except ConfigError as e:
        log.error("config error: %s", e)
        return EXIT_CONFIG
    except SimulationError as e:
        log.error("numerical error: %s", e)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
