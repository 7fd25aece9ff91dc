"""Command-line experiment runner.

Subcommands:

* ``nmlab figure <fig-id>``  compute one figure's CSV data
* ``nmlab verify``           run the acceptance checks, JSON report + summary
* ``nmlab measure <name>``   one non-Markovianity measure at a given p
* ``nmlab plot <csv>``       minimal SVG rendering of a figure CSV

A JSON config file (see RunConfig) supplies sweep settings; command-line
flags override it. NMLAB_WORKERS sets the default worker count.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .figures import FIG_IDS, RunConfig, run_figure
from .nonmarkov import blp_measure, lfs_measure, rhp_measure
from .plotting import emit_plot
from .register import CircuitVariant, DynamicsScheme, Interpolation
from .sweep import default_grid
from .verify import run_all


def _load_config(path: str | None) -> RunConfig:
    return RunConfig.from_file(path) if path else RunConfig()


def _cmd_figure(args) -> int:
    cfg = _load_config(args.config)
    overrides = {}
    if args.out is not None:
        overrides["out_dir"] = args.out
    if args.workers is not None:
        overrides["workers"] = args.workers
    if overrides:
        cfg = cfg.replace(**overrides)
    for path in run_figure(args.fig_id, cfg):
        print(path)
    return 0


def _cmd_verify(args) -> int:
    cfg = _load_config(args.config)
    if args.out is not None:
        cfg = cfg.replace(out_dir=args.out)
    results = run_all(cfg)
    for r in results:
        print(r.line())
    n_fail = sum(not r.passed for r in results)
    report = {
        "config": cfg.to_dict(),
        "config_hash": cfg.config_hash(),
        "checks": [r.to_dict() for r in results],
        "failures": n_fail,
    }
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report_path = out / "verify_report.json"
    report_path.write_text(json.dumps(report, indent=2) + "\n")
    print(f"{len(results) - n_fail}/{len(results)} checks passed; report: {report_path}")
    return 1 if n_fail else 0


def _cmd_measure(args) -> int:
    cfg = _load_config(args.config)
    scheme = DynamicsScheme(
        Interpolation.BLOCK_LOG if args.scheme == "block" else Interpolation.GATE_BY_GATE,
        CircuitVariant.SWAP_TERMINATED if args.variant == "swap" else CircuitVariant.ORIGINAL_BBC,
    )
    grid = default_grid(scheme, cfg.steps_per_unit)
    if args.name == "blp":
        observe = "S" if args.observe == "s" else "E2"
        report = blp_measure(scheme, args.p, grid, cfg.opt_config(), observe=observe)
    else:
        if args.observe != "s":
            print("only the BLP measure supports --observe e2", file=sys.stderr)
            return 2
        if args.name == "rhp":
            report = rhp_measure(scheme, args.p, grid, cfg.rhp_eps, cfg.svd_tol)
        else:
            report = lfs_measure(scheme, args.p, grid)
    print(json.dumps(report.to_dict(), indent=2))
    return 0


def _cmd_plot(args) -> int:
    try:
        for path in emit_plot(args.csv, args.kind):
            print(path)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nmlab",
        description="Open-system analysis of the measurement-free teleportation circuit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fig = sub.add_parser("figure", help="compute figure data as CSV")
    fig.add_argument("fig_id", choices=FIG_IDS)
    fig.add_argument("--config", help="JSON config file")
    fig.add_argument("--out", help="output directory")
    fig.add_argument("--workers", type=int, help="parallel worker count")
    fig.set_defaults(func=_cmd_figure)

    ver = sub.add_parser("verify", help="run all acceptance checks")
    ver.add_argument("--config", help="JSON config file")
    ver.add_argument("--out", help="directory for verify_report.json")
    ver.set_defaults(func=_cmd_verify)

    mea = sub.add_parser("measure", help="compute one non-Markovianity measure")
    mea.add_argument("name", choices=("blp", "rhp", "lfs"))
    mea.add_argument("--p", type=float, required=True, help="Werner parameter in [0,1]")
    mea.add_argument("--scheme", choices=("block", "gates"), required=True)
    mea.add_argument("--variant", choices=("swap", "bbc"), default="swap")
    mea.add_argument("--observe", choices=("s", "e2"), default="s",
                     help="observed wire for the BLP trace distance")
    mea.add_argument("--config", help="JSON config file")
    mea.set_defaults(func=_cmd_measure)

    plo = sub.add_parser("plot", help="render a figure CSV as minimal SVG")
    plo.add_argument("csv")
    plo.add_argument("--kind", choices=("line", "heatmap"), required=True)
    plo.set_defaults(func=_cmd_plot)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
