"""Command-line entry point.

Exit codes: 0 success, 1 usage or validation error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
from pathlib import Path
from typing import Sequence

from .config import ConfigError, ScenarioConfig, load_scenario_config
from .measures import MeasureConflict, MissingCostBasis
from .pipeline import (
    ScenarioError,
    calibration_summary,
    prepare,
    run_pareto,
    run_per_measure,
    run_waterfall,
)
from .reports import EndUseImportError, emit_reports

OUT_ENV = "RETROFIT_LCC_OUT"
EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2

log = logging.getLogger("retrofit_lcc")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise _UsageError(f"{self.format_usage()}{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="scenario TOML file")
    common.add_argument("--out", metavar="DIR", help=f"report directory (default: ${OUT_ENV}, then report_dir)")
    common.add_argument("--mode", choices=("simulate", "import"), help="override the scenario mode")
    common.add_argument("--no-calibrate", action="store_true", help="skip configured calibration")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="retrofit-lcc", description="Evaluate building retrofit measures.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("evaluate", parents=[common], help="per-measure deltas, full-package waterfall and Pareto front")
    sub.add_parser("waterfall", parents=[common], help="cumulative effect of the package in waterfall order")
    p = sub.add_parser("pareto", parents=[common], help="Pareto front over all measure subsets")
    p.add_argument("--sample", type=int, metavar="N", help="evaluate N random subsets instead of all")
    p.add_argument("--seed", type=int, default=0)
    sub.add_parser("calibrate", parents=[common], help="tune the energy model to target totals")
    sub.add_parser("validate", parents=[common], help="load and validate the scenario only")
    return parser


def _out_dir(args: argparse.Namespace, cfg: ScenarioConfig) -> Path:
    if args.out:
        return Path(args.out)
    if os.environ.get(OUT_ENV):
        return Path(os.environ[OUT_ENV])
    if cfg.report_dir is not None:
        return cfg.report_dir
    return Path("reports")


def _load(args: argparse.Namespace) -> ScenarioConfig:
    cfg = load_scenario_config(args.config)
    if args.mode and args.mode != cfg.mode:
        if args.mode == "import" and cfg.import_path is None:
            raise ScenarioError("--mode import needs import_path in the scenario")
        cfg = dataclasses.replace(cfg, mode=args.mode)
    return cfg


def _run(args: argparse.Namespace) -> int:
    cfg = _load(args)
    if args.command == "validate":
        print(f"{args.config}: ok ({len(cfg.measures)} measures, mode {cfg.mode})")
        return EXIT_OK

    prepared = prepare(cfg, calibrate=False if args.no_calibrate else None)
    out = _out_dir(args, cfg)
    extra = {
        "scenario": cfg.name,
        "mode": cfg.mode,
        "calibration": calibration_summary(prepared.calibration),
    }
    if cfg.reference:
        extra["reference"] = dict(cfg.reference)

    if args.command == "calibrate":
        summary = calibration_summary(prepared.calibration)
        if summary is None:
            raise ScenarioError("scenario has no enabled [calibration] section (or runs in import mode)")
        out.mkdir(parents=True, exist_ok=True)
        text = json.dumps(summary, indent=2, sort_keys=True) + "\n"
        (out / "calibration.json").write_text(text, encoding="utf-8")
        print(text, end="")
        return EXIT_OK if prepared.calibration.feasible else EXIT_INVALID

    rows, wf, front = [], None, None
    if args.command == "evaluate":
        rows = run_per_measure(prepared)
        wf = run_waterfall(prepared)
        if prepared.imported is None:
            front = run_pareto(prepared)
    elif args.command == "waterfall":
        wf = run_waterfall(prepared)
    elif args.command == "pareto":
        front = run_pareto(prepared, sample=args.sample, seed=args.seed)
    for p in emit_reports(rows, wf, front, out, extra):
        print(p)
    return EXIT_OK


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        sys.stderr.write(str(exc))
        return EXIT_INVALID
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    if not args.config:
        sys.stderr.write(parser.format_usage())
        sys.stderr.write("retrofit-lcc: error: --config PATH is required\n")
        return EXIT_INVALID
    try:
        return _run(args)
    except ConfigError as exc:
        for issue in exc.issues:
            sys.stderr.write(f"error: {issue}\n")
        return EXIT_INVALID
    except (ScenarioError, MeasureConflict, MissingCostBasis, EndUseImportError, ValueError, KeyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID
    except OSError as exc:
        where = f" ({exc.filename})" if getattr(exc, "filename", None) else ""
        sys.stderr.write(f"I/O error{where}: {exc.strerror or exc}\n")
        return EXIT_IO


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
