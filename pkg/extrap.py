#!/usr/bin/env python3
"""
Neural extrapolation experiments: condition numbers, training, scenario runs,
least-squares fits and gradient checks.
"""

import argparse
import json
import logging
import re
import sys
import time
from pathlib import Path

import numpy as np

from extrapolation import config
from extrapolation.analysis import condition_number
from extrapolation.bases import eval_function
from extrapolation.datagen import SampleSet
from extrapolation.domains import orthogonalize, parse_domain
from extrapolation.errors import ConfigError, ExtrapolationError
from extrapolation.lsfit import extrapolate_ls, fit_ls
from extrapolation.nnet.gradcheck import run_gradcheck
from extrapolation.pipeline.io import (
    emit_report,
    load_config,
    load_samples_csv,
    save_model,
    save_samples_csv,
    trim_log_by_time,
)
from extrapolation.registry import build_family
from extrapolation.runner import (
    ExperimentReport,
    build_scenario,
    eval_points_for,
    log_summary,
    rmse,
    run_scenario,
    sample_points_for,
    train_model,
    validation_pairs,
)

logger = logging.getLogger("extrap")

EXIT_USAGE = 1
EXIT_NUMERICAL = 2


def setup_logging(out_dir=None):
    """Log to stderr, and to <out_dir>/extrap-log.txt when out_dir is given.

    The existing run log is trimmed to the retention window first.
    """
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
        handler.close()
    root.setLevel(logging.INFO)

    formatter = logging.Formatter("[%(asctime)s] [%(levelname)s] %(message)s", "%Y-%m-%d %H:%M:%S")
    formatter.converter = time.gmtime

    stderr = logging.StreamHandler(sys.stderr)
    stderr.setFormatter(formatter)
    root.addHandler(stderr)

    if out_dir is None:
        return None
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    log_path = out_dir / config.LOG_NAME
    existing_log = trim_log_by_time(log_path, retention_days=config.LOG_RETENTION_DAYS)
    with open(log_path, "w") as f:
        f.writelines(existing_log + ["\n--- New Run ---\n"])

    file_handler = logging.FileHandler(log_path, mode="a", encoding="utf-8")
    file_handler.setFormatter(formatter)
    root.addHandler(file_handler)
    return log_path


def model_filename(scenario, name):
    safe = re.sub(r"[^A-Za-z0-9_.=+-]+", "_", name)
    return f"{scenario}-{safe}.model.json"


def _load_cfg(path, seed):
    cfg = dict(load_config(path)) if path else {}
    if seed is not None:
        cfg["seed"] = seed
    return cfg


def cmd_condition_number(args):
    settings = {
        "basis": args.basis,
        "degree": args.degree,
        "anchor_set": args.anchor_set,
        "fillers": args.fillers,
    }
    family = build_family(settings)
    omega, xi = parse_domain(args.omega), parse_domain(args.xi)
    if args.orthogonalize:
        family = orthogonalize(family, omega)
    record = condition_number(family, omega, xi).to_record()
    record.update({"basis": args.basis, "omega": omega.describe(), "xi": xi.describe(), "orthogonalized": args.orthogonalize})
    print(json.dumps(record, indent=2, sort_keys=True))
    return 0


def cmd_train(args):
    setup_logging(Path(args.out).parent)
    sc = build_scenario(_load_cfg(args.config, args.seed))
    omega, xi = sc.domain("omega"), sc.domain("xi")
    family = build_family(sc.settings)
    report = ExperimentReport(scenario=sc.name, seed=sc.seed, settings=dict(sc.settings))
    model = train_model(
        sc, report, "next", sc.gen_config(), sc.train_config(),
        family, omega, xi, sample_points_for(sc, omega), sc.rng("train"),
    )
    path = save_model(model, args.out)
    logger.info("Model saved to %s", path)
    return 0


def cmd_run(args):
    out_dir = Path(args.out or config.OUTPUT_DIR)
    log_path = setup_logging(out_dir)
    cfg = _load_cfg(args.config, args.seed)
    if cfg.get("scenario", args.scenario) != args.scenario:
        raise ConfigError("scenario", f"config names '{cfg['scenario']}' but --scenario is '{args.scenario}'")
    cfg["scenario"] = args.scenario
    sc = build_scenario(cfg, timings=not args.no_timings)

    try:
        report = run_scenario(sc)
    except Exception:
        logger.exception("Scenario %s failed", sc.name)
        raise

    log_summary(report)
    csv_path, meta_path = emit_report(report, out_dir)
    logger.info("Report saved to %s", csv_path)
    logger.info("Metadata saved to %s", meta_path)
    for name, model in report.models.items():
        path = save_model(model, out_dir / model_filename(sc.name, name))
        logger.info("Model %s saved to %s", name, path)
    logger.info("Log saved to %s", log_path)
    return 0


def cmd_ls_fit(args):
    out_dir = Path(args.out or config.OUTPUT_DIR)
    setup_logging(out_dir)
    cfg = _load_cfg(args.config, args.seed)
    sc = build_scenario(cfg)
    omega, xi = sc.domain("omega"), sc.domain("xi")
    family = build_family(sc.settings)
    xi_points = eval_points_for(sc, xi)

    truth = None
    if args.samples:
        samples = load_samples_csv(args.samples)
        logger.info("Loaded %d samples from %s", len(samples.values), args.samples)
    else:
        sample_points = sample_points_for(sc, omega)
        (samples, truth), = validation_pairs(sc, family, sample_points, "ls-fit", batch_size=1)
        save_samples_csv(samples, out_dir / "ls-fit-samples.csv")

    solution = fit_ls(samples, family, sc.settings.get("ridge", 0.0))
    predicted = extrapolate_ls(solution, family, xi_points)
    record = {
        "coefficients": solution.coefficients.tolist(),
        "residual_norm": solution.residual_norm,
        "rank": solution.rank,
        "rank_deficient": solution.rank_deficient,
        "kappa": condition_number(family, omega, xi).kappa,
    }
    if truth is not None:
        record["true_coefficients"] = truth.tolist()
        record["xi_rmse"] = rmse(eval_function(family, truth, xi_points), predicted)

    with open(out_dir / "ls-fit.json", "w") as f:
        json.dump(record, f, indent=2, sort_keys=True)
        f.write("\n")
    save_samples_csv(SampleSet(points=xi_points, values=predicted), out_dir / "ls-fit-xi.csv")
    logger.info("LS fit saved to %s", out_dir / "ls-fit.json")
    return 0


def cmd_gradcheck(args):
    results = run_gradcheck(np.random.default_rng(args.seed))
    print(json.dumps(results, indent=2, sort_keys=True))
    failed = [name for name, err in results.items() if err >= args.tolerance]
    if failed:
        print(f"Gradient check failed for: {', '.join(failed)}", file=sys.stderr)
        return EXIT_NUMERICAL
    return 0


def parse_args(argv=None):
    parser = argparse.ArgumentParser(prog="extrap", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("condition-number", help="Report kappa for a family on Omega and Xi.")
    p.add_argument("--basis", choices=config.BASIS_KINDS, required=True)
    p.add_argument("--degree", type=int, default=0, help="Polynomial / harmonic degree or highest frequency.")
    p.add_argument("--anchor-set", choices=config.ANCHOR_SETS, default="non-decaying")
    p.add_argument("--fillers", type=int, default=0, help="Trigonometric fillers after the anchors.")
    p.add_argument("--omega", required=True, help='Data domain, e.g. "interval:-1:0.5)".')
    p.add_argument("--xi", required=True, help='Extrapolation domain, e.g. "interval:0.5:1".')
    p.add_argument("--orthogonalize", action="store_true", help="Gram-Schmidt the family on Omega first.")
    p.set_defaults(handler=cmd_condition_number)

    p = sub.add_parser("train", help="Train one network and write its model file.")
    p.add_argument("--config", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True, help="Model JSON path.")
    p.add_argument("--seed", type=int, default=None, help="Overrides the config seed.")
    p.set_defaults(handler=cmd_train)

    p = sub.add_parser("run", help="Run a scenario and write its report.")
    p.add_argument("--scenario", choices=config.SCENARIOS, required=True)
    p.add_argument("--config", type=Path, default=None)
    p.add_argument("--out", type=Path, default=None, help=f"Output directory (default {config.OUTPUT_DIR}).")
    p.add_argument("--seed", type=int, default=None, help="Overrides the config seed.")
    p.add_argument("--no-timings", action="store_true", help="Write wall_time_s = 0.0 everywhere.")
    p.set_defaults(handler=cmd_run)

    p = sub.add_parser("ls-fit", help="Least-squares fit of one sample set.")
    p.add_argument("--config", type=Path, required=True)
    p.add_argument("--samples", type=Path, default=None, help="CSV with x,y or theta,phi,y columns.")
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(handler=cmd_ls_fit)

    p = sub.add_parser("gradcheck", help="Finite-difference check of backpropagation.")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, default=1e-4)
    p.set_defaults(handler=cmd_gradcheck)

    return parser.parse_args(argv)


def main(argv=None):
    args = parse_args(argv)
    try:
        return args.handler(args)
    except (ConfigError, FileNotFoundError) as e:
        print(f"extrap: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ExtrapolationError, ValueError, FloatingPointError) as e:
        print(f"extrap: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
