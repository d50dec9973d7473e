"""Command-line interface: simulate, fit, evaluate and report.

Exit codes: 0 success, 1 sampler failure, 2 bad arguments, input or validation errors.
"""
import argparse
import logging
import os
import sys
from typing import Any, Dict, List, Optional

import msgspec
import pandas as pd

from . import __version__
from .core import ItsConfig, ModelConfig, encode
from .data import (
    load_config, output_paths, read_report, read_series, read_truth, write_report, write_report_csv,
    write_series, write_truth
)
from .distributions import make_rng, spawn_seeds
from .engine import FitEngine
from .errors import BadParamError, SamplerError, ShrinkcpError
from .evaluation import BenchmarkRow, adjusted_rand, cp_metrics, outlier_metrics, rand_index, run_benchmark
from .scenarios import SCENARIO_REGISTRY, generate, lookup, make_scenario

logger = logging.getLogger("shrinkcp")

TABLE_COLUMNS = {
    "method": "Algorithm",
    "rand_avg": "Rand Avg.",
    "adj_rand_avg": "Adj. Rand Avg.",
    "avg_no_cp": "Avg. No. CP",
    "n_zero_cp": "No. Zero CP",
    "avg_dist": "Avg. Dist. to True",
    "se": "SE",
    "avg_diff_cp": "Avg. Diff. CP",
    "tpr": "TPR",
    "fpr": "FPR",
    "n_reps": "Reps",
    "failures": "Failures",
}


def configure_logging(quiet: bool, verbose: bool) -> None:
    level = logging.WARNING if quiet else logging.DEBUG if verbose else logging.INFO
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
    root = logging.getLogger("shrinkcp")
    root.handlers[:] = [handler]
    root.setLevel(level)


def parse_params(items: Optional[List[str]]) -> Dict[str, float]:
    params: Dict[str, float] = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise BadParamError(f"--param expects key=value, got {item!r}")
        try:
            params[key.strip()] = float(value)
        except ValueError as exc:
            raise BadParamError(f"--param {key}: {value!r} is not a number") from exc
    return params


def model_config(args: argparse.Namespace) -> ModelConfig:
    """Config file (or defaults) with any explicitly given flags applied on top."""
    config = load_config(getattr(args, "config", None))
    overrides: Dict[str, Any] = {}
    for flag, field_name in [("d", "d"), ("iters", "iters"), ("burn", "burn"), ("thin", "thin"),
                             ("seed", "seed"), ("cp_cutoff", "cp_prob_cutoff"), ("min_sep", "min_cp_separation"),
                             ("cp_window", "cp_window")]:
        value = getattr(args, flag, None)
        if value is not None:
            overrides[field_name] = value
    if getattr(args, "no_sv", False):
        overrides["use_sv_noise"] = False
    if getattr(args, "no_outliers", False):
        overrides["use_outliers"] = False
    if getattr(args, "horseshoe", False):
        overrides["horseshoe"] = True
    if "burn" not in overrides and "iters" in overrides and config.burn >= overrides["iters"]:
        overrides["burn"] = overrides["iters"] // 2
    return msgspec.structs.replace(config, **overrides)


def cmd_simulate(args: argparse.Namespace) -> int:
    entry = lookup(args.scenario)
    scenario = make_scenario(entry.name, args.t, args.seed, parse_params(args.param))
    os.makedirs(args.out_dir, exist_ok=True)
    seeds = [args.seed] if args.reps == 1 else spawn_seeds(args.seed, args.reps)
    for i, seed in enumerate(seeds):
        series, truth = generate(scenario, make_rng(seed))
        stem = f"{entry.name}_t{scenario.t_len}_seed{args.seed}"
        if args.reps > 1:
            stem += f"_{i}"
        base = os.path.join(args.out_dir, stem)
        write_series(base + ".csv", series)
        write_truth(base + ".truth.json", truth)
        logger.info("wrote %s.csv (%d changepoints)", base, len(truth.changepoints))
    return 0


def cmd_fit(args: argparse.Namespace) -> int:
    series = read_series(args.input)
    config = model_config(args)
    its = None
    if args.intervention is not None:
        its = ItsConfig(pi=args.intervention, upsilon_var=args.upsilon_var)
    result = FitEngine(config, its).run_fit(series)
    out = args.out or os.path.splitext(args.input)[0] + ".report"
    multi = len(result.reports) > 1
    for report in result.reports:
        json_path, csv_path = output_paths(out, report.predictor if multi else None)
        write_report(json_path, report)
        write_report_csv(csv_path, report)
        logger.info("wrote %s and %s", json_path, csv_path)
        for cp in report.changepoints:
            print(f"x{report.predictor + 1} {cp}" if multi and report.predictor is not None else cp)
    logger.info("%d sweeps in %.1fs", config.iters, result.timing["duration_seconds"])
    return 0


def benchmark_frame(rows: List[BenchmarkRow]) -> pd.DataFrame:
    records = []
    for row in rows:
        rec = {TABLE_COLUMNS[k]: v for k, v in msgspec.structs.asdict(row).items() if k in TABLE_COLUMNS}
        for j, v in enumerate(row.avg_no_cp_by_predictor or []):
            rec[f"Avg. No. CP Pred{j + 1}"] = v
        records.append(rec)
    return pd.DataFrame.from_records(records)


def cmd_evaluate(args: argparse.Namespace) -> int:
    if args.scenario:
        config = model_config(args)
        scenario = make_scenario(args.scenario, args.t, args.seed or 0, parse_params(args.param))
        methods = [m.strip() for m in args.methods.split(",") if m.strip()]
        rows = run_benchmark(scenario, args.reps, methods, config, jobs=args.jobs)
        frame = benchmark_frame(rows)
        if args.out:
            frame.to_csv(args.out, index=False)
        print(frame.to_string(index=False))
        return 0
    if not (args.pred and args.truth):
        raise BadParamError("evaluate needs --pred and --truth, or --scenario for a benchmark")
    report = read_report(args.pred)
    truth = read_truth(args.truth)
    t_len = report.values.shape[0]
    cm = cp_metrics(report.changepoints, truth.changepoints)
    metrics: Dict[str, Any] = {
        "rand": rand_index(report.changepoints, truth.changepoints, t_len),
        "adj_rand": adjusted_rand(report.changepoints, truth.changepoints, t_len),
        "avg_dist_to_true": cm.avg_dist_to_true,
        "diff_cp_count": cm.diff_cp_count,
        "n_pred": cm.n_pred,
    }
    if report.flagged_outliers is not None and truth.outliers:
        om = outlier_metrics(report.flagged_outliers, truth.outliers, t_len)
        metrics.update(tpr=om.tpr, fpr=om.fpr)
    data = encode(metrics)
    if args.out:
        with open(args.out, "wb") as f:
            f.write(data)
    print(data.decode("utf-8"))
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    report = read_report(args.report)
    print(f"method: {report.method}  d: {report.d}  DIC: {report.dic:.3f}")
    print("changepoints: " + (", ".join(map(str, report.changepoints)) or "none"))
    if report.flagged_outliers is not None:
        print("outliers: " + (", ".join(map(str, report.flagged_outliers)) or "none"))
    if report.intervention is not None:
        iv = report.intervention
        print(f"intervention at {iv.pi}: level shift {iv.level_shift.mean:.3f} "
              f"[{iv.level_shift.p2_5:.3f}, {iv.level_shift.p97_5:.3f}], "
              f"slope change {iv.slope_change.mean:.3f} [{iv.slope_change.p2_5:.3f}, {iv.slope_change.p97_5:.3f}]")
    if args.csv:
        write_report_csv(args.csv, report)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("--quiet", action="store_true", help="only warnings and errors on stderr")
    verbosity.add_argument("--verbose", action="store_true", help="debug logging on stderr")
    common.add_argument("--jobs", type=int, default=None, help="parallel replicates (default: all cores)")

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--config", help="ModelConfig JSON file; flags override it")
    model.add_argument("--d", type=int, choices=[1, 2, 3], help="difference order")
    model.add_argument("--iters", type=int, help="total sweeps")
    model.add_argument("--burn", type=int, help="discarded sweeps")
    model.add_argument("--thin", type=int, help="keep every n-th sweep after burn-in")
    model.add_argument("--seed", type=int, help="random seed")
    model.add_argument("--no-sv", action="store_true", help="constant observation variance")
    model.add_argument("--no-outliers", action="store_true", help="drop the outlier component")
    model.add_argument("--horseshoe", action="store_true", help="freeze phi1 = phi2 = 0")
    model.add_argument("--cp-cutoff", type=float, help="changepoint probability cutoff")
    model.add_argument("--min-sep", type=int, help="minimum spacing between declared changepoints")
    model.add_argument("--cp-window", type=int, help="increments pooled per changepoint window (default: d)")

    parser = argparse.ArgumentParser(prog="shrinkcp", description="Bayesian threshold-shrinkage changepoint detection")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="generate scenario data and ground truth")
    p.add_argument("--scenario", required=True, help=f"one of: {', '.join(sorted(SCENARIO_REGISTRY))}")
    p.add_argument("--t", type=int, help="series length (default: scenario default)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--param", action="append", metavar="K=V", help="override a scenario parameter")
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fit", parents=[common, model], help="fit a series CSV and write the report")
    p.add_argument("--input", required=True, help="CSV with columns t (optional), y, x1..xp (optional)")
    p.add_argument("--intervention", type=int, help="intervention index for interrupted time series (d=2)")
    p.add_argument("--upsilon-var", type=float, help="prior variance of the intervention jumps")
    p.add_argument("--out", help="output stem; writes <out>.json and <out>.csv")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("evaluate", parents=[common, model], help="score a report or run a benchmark")
    p.add_argument("--pred", help="report JSON")
    p.add_argument("--truth", help="truth JSON")
    p.add_argument("--scenario", help="benchmark scenario name")
    p.add_argument("--t", type=int)
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--methods", default="abco,horseshoe,pelt")
    p.add_argument("--param", action="append", metavar="K=V")
    p.add_argument("--out", help="metrics JSON (single run) or table CSV (benchmark)")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("report", parents=[common], help="summarise an existing report JSON")
    p.add_argument("--report", required=True)
    p.add_argument("--csv", help="re-emit the flat CSV to this path")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.quiet, args.verbose)
    try:
        return int(args.func(args))
    except SamplerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ShrinkcpError, OSError, msgspec.ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
