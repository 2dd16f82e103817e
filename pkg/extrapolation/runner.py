"""Scenario orchestration: build domains and families, train, validate, score."""
import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass, field

import numpy as np

from extrapolation import config
from extrapolation.datagen import GenConfig, make_batch, stack_batch
from extrapolation.domains import gram_matrix, grid_points, parse_domain, union
from extrapolation.errors import ConfigError
from extrapolation.lsfit import fit_ls
from extrapolation.nnet.pointwise import fit_pointwise, predict_pointwise
from extrapolation.nnet.train import TrainConfig, TrainedModel, predict_extrapolation, train
from extrapolation.pipeline.metrics import MethodMetrics
from extrapolation.pipeline.validate import validate_config

logger = logging.getLogger(__name__)

POINTWISE_ACTIVATIONS = {"relu-net": "relu", "snake-net": "snake"}


def rmse(truth, pred):
    truth = np.asarray(truth, dtype=float)
    pred = np.asarray(pred, dtype=float)
    if truth.shape != pred.shape:
        raise ValueError(f"rmse needs equal lengths, got {truth.shape} and {pred.shape}")
    if truth.size == 0:
        raise ValueError("rmse needs at least one value")
    return float(np.sqrt(np.mean((truth - pred) ** 2)))


def reduction_rate(baseline, candidate):
    """Percent error reduction of candidate relative to baseline."""
    if baseline <= 0:
        raise ValueError("reduction_rate needs a positive baseline")
    return 100.0 * (1.0 - candidate / baseline)


@dataclass
class Scenario:
    name: str
    seed: int
    settings: dict
    timings: bool = True

    @property
    def methods(self):
        return list(self.settings.get("methods") or [])

    def domain(self, key):
        return parse_domain(self.settings[key])

    def gen_config(self, **overrides):
        return GenConfig.from_dict({**self.settings, **overrides})

    def train_config(self, **overrides):
        return TrainConfig.from_dict({**self.settings, **overrides})

    def rng(self, stream):
        """Independent generator per named stream, fixed by the scenario seed."""
        salt = sum(ord(ch) * 31 ** i for i, ch in enumerate(stream)) % 2**32
        return np.random.default_rng([self.seed, salt])


@dataclass
class ExperimentReport:
    scenario: str
    seed: int
    settings: dict
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)
    models: dict = field(default_factory=dict)

    def row_record(self, row):
        return {
            "scenario": self.scenario,
            "method": row.method,
            "degree_or_setting": row.setting,
            "xi_rmse": row.xi_rmse,
            "coeff_rmse": row.coeff_rmse,
            "omega_rmse": row.omega_rmse,
            "kappa": row.kappa,
            "seed": self.seed,
            "wall_time_s": row.wall_time_s,
        }

    def metadata_record(self):
        return {
            "schema_version": config.SCHEMA_VERSION,
            "scenario": self.scenario,
            "seed": self.seed,
            "config": self.settings,
            **self.metadata,
        }

    def find(self, method, setting):
        for row in self.rows:
            if row.method == method and row.setting == setting:
                return row
        raise KeyError(f"No row for {method} / {setting}")


def build_scenario(cfg, seed=None, timings=True):
    """Registry defaults overridden key by key by cfg (and by seed if given)."""
    from extrapolation.registry import get_scenarios

    validate_config(cfg, require=False)
    name = cfg.get("scenario")
    scenarios = get_scenarios()
    if name not in scenarios:
        raise ConfigError("scenario", f"unknown scenario '{name}'")

    settings = {**scenarios[name].defaults, **cfg}
    if seed is not None:
        settings["seed"] = seed
    validate_config(settings)
    return Scenario(name=name, seed=int(settings["seed"]), settings=settings, timings=timings)


def run_scenario(sc):
    from extrapolation.registry import get_scenarios

    report = ExperimentReport(scenario=sc.name, seed=sc.seed, settings=dict(sc.settings))
    logger.info("Running scenario %s (seed %d)", sc.name, sc.seed)
    get_scenarios()[sc.name].run(sc, report)
    logger.info("Scenario %s finished with %d rows", sc.name, len(report.rows))
    return report


@contextmanager
def stopwatch(sc, sink):
    """Adds elapsed wall time to sink["elapsed"]; always 0.0 with timings off."""
    start = time.time()
    try:
        yield sink
    finally:
        sink["elapsed"] = sink.get("elapsed", 0.0) + (time.time() - start if sc.timings else 0.0)


def sample_points_for(sc, omega):
    n = int(sc.settings["n_samples"])
    if omega.spherical:
        return grid_points(omega, max(2, int(round(np.sqrt(n)))))
    return grid_points(omega, n)


def eval_points_for(sc, dom):
    if dom.spherical:
        return grid_points(dom, config.EVAL_GRID_SPHERE)
    return grid_points(dom, int(sc.settings["n_eval"]))


def validation_pairs(sc, family, sample_points, stream, **overrides):
    """validation_count fresh pairs on their own stream; overrides adjust the sampling settings."""
    cfg = sc.gen_config(**{"batch_size": int(sc.settings["validation_count"]), **overrides})
    omega, xi = sc.domain("omega"), sc.domain("xi")
    monotone_domain = union(omega, xi) if cfg.monotone else None
    gram_omega = gram_matrix(omega, family) if cfg.norm == "function-omega" else None
    return make_batch(cfg, family, sample_points, sc.rng(stream), monotone_domain, gram_omega, omega)


def train_model(sc, report, name, gen_cfg, train_cfg, family, omega, xi, sample_points, rng):
    logger.info("Training %s (d=%d, N=%d)", name, family.dimension, len(sample_points))
    history = []
    clock = {}
    with stopwatch(sc, clock):
        net = train(gen_cfg, train_cfg, family, omega, xi, sample_points, rng, history)
    model = TrainedModel(
        name=name,
        net=net,
        family=family,
        omega=omega,
        xi=xi,
        sample_points=np.asarray(sample_points),
        gen_config=gen_cfg,
        train_config=train_cfg,
        seed=sc.seed,
    )
    report.models[name] = model
    report.metadata.setdefault("training", {})[name] = {
        "steps": len(history),
        "final_loss": float(history[-1]),
        "train_time_s": clock["elapsed"],
    }
    return model


def score_coefficient_methods(sc, report, setting, family, omega, xi, pairs, models, kappa, ridge=0.0):
    """Mean RMSE rows for every configured method on validation pairs inside the span.

    ``models`` maps row labels to trained models; they all stand for the
    ``next`` method.
    """
    xi_points = eval_points_for(sc, xi)
    omega_points = eval_points_for(sc, omega)
    design_xi = family.evaluate(xi_points)
    design_omega = family.evaluate(omega_points)
    values, truth = stack_batch(pairs)

    def scored(label, predicted_coefficients, clock, predicted_xi=None):
        if predicted_xi is None:
            predicted_xi = predicted_coefficients @ design_xi.T
        row = MethodMetrics(method=label, setting=setting, kappa=kappa)
        row.xi_rmse = float(np.mean([rmse(design_xi @ t, y) for t, y in zip(truth, predicted_xi)]))
        row.omega_rmse = float(np.mean([rmse(design_omega @ t, design_omega @ p) for t, p in zip(truth, predicted_coefficients)]))
        row.coeff_rmse = float(np.mean([rmse(t, p) for t, p in zip(truth, predicted_coefficients)]))
        row.wall_time_s = clock["elapsed"]
        return row

    for method in sc.methods:
        if method == "next":
            for label, model in models.items():
                clock = {}
                with stopwatch(sc, clock):
                    predicted = model.predict_coefficients(values)
                    predicted_xi = np.stack([
                        predict_extrapolation(model.net, samples, family, xi_points) for samples, _ in pairs
                    ])
                report.rows.append(scored(label, predicted, clock, predicted_xi))
        elif method == "ls":
            clock = {}
            with stopwatch(sc, clock):
                predicted = np.stack([fit_ls(samples, family, ridge).coefficients for samples, _ in pairs])
            report.rows.append(scored("ls", predicted, clock))
        elif method in POINTWISE_ACTIVATIONS:
            if xi.spherical:
                logger.warning("Skipping %s: pointwise baselines run on interval domains only", method)
                continue
            report.rows.append(
                score_pointwise(sc, method, setting, pairs, design_xi @ truth.T, design_omega @ truth.T,
                                xi_points, omega_points, kappa)
            )


def score_pointwise(sc, method, setting, pairs, truth_xi, truth_omega, xi_points, omega_points, kappa):
    """Pointwise network fit per validation function; truth arrays are (points, functions)."""
    train_cfg = sc.train_config()
    rng = sc.rng(f"{method}:{setting}")
    row = MethodMetrics(method=method, setting=setting, kappa=kappa)
    xi_scores, omega_scores = [], []
    clock = {}
    with stopwatch(sc, clock):
        for j, (samples, _) in enumerate(pairs):
            net = fit_pointwise(samples, train_cfg, POINTWISE_ACTIVATIONS[method], rng)
            xi_scores.append(rmse(truth_xi[:, j], predict_pointwise(net, xi_points)))
            omega_scores.append(rmse(truth_omega[:, j], predict_pointwise(net, omega_points)))
    row.xi_rmse = float(np.mean(xi_scores))
    row.omega_rmse = float(np.mean(omega_scores))
    row.wall_time_s = clock["elapsed"]
    return row


def record_reductions(report, setting, baseline="ls"):
    """Reduction rate of every `next*` row over the baseline row of the same setting."""
    try:
        base = report.find(baseline, setting)
    except KeyError:
        return
    rates = report.metadata.setdefault("reduction_rate", {}).setdefault(setting, {})
    for row in report.rows:
        if row.setting == setting and row.method.startswith("next") and base.xi_rmse > 0:
            rates[f"{row.method}_vs_{baseline}"] = reduction_rate(base.xi_rmse, row.xi_rmse)


def log_summary(report):
    logger.info("")
    logger.info("=" * 78)
    logger.info("SCENARIO SUMMARY: %s", report.scenario)
    logger.info("=" * 78)
    logger.info(f"{'Method':<22} {'Setting':<22} {'Xi RMSE':>9} {'Coef RMSE':>9} {'Om RMSE':>9} {'Time':>8}")
    logger.info("-" * 78)
    for row in report.rows:
        cells = [f"{v:.4f}" if v is not None else "-" for v in (row.xi_rmse, row.coeff_rmse, row.omega_rmse)]
        time_str = f"{row.wall_time_s:.1f}s"
        logger.info(f"{row.method:<22} {row.setting:<22} {cells[0]:>9} {cells[1]:>9} {cells[2]:>9} {time_str:>8}")
    logger.info("=" * 78)
