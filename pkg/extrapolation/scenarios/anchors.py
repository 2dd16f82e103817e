"""Anchored extrapolation of 0.8^x - cos x + 2 sin 2x + 1/(x+1).

Omega = [0, 1.5 pi), Xi = [1.5 pi, 2 pi]. The frame is three anchors,
optionally followed by seven trigonometric fillers.
"""
import logging

from extrapolation import config
from extrapolation.analysis import condition_number, projection_split
from extrapolation.bases import eval_function, make_anchor_frame
from extrapolation.datagen import SampleSet, add_noise
from extrapolation.domains import check_rank, gram_matrix
from extrapolation.errors import RankDeficiencyError
from extrapolation.functions import FunctionHandle, term, trigonometric_terms
from extrapolation.lsfit import fit_ls
from extrapolation.nnet.pointwise import fit_pointwise, predict_pointwise
from extrapolation.pipeline.metrics import MethodMetrics
from extrapolation.runner import (
    POINTWISE_ACTIVATIONS,
    eval_points_for,
    reduction_rate,
    rmse,
    sample_points_for,
    stopwatch,
    train_model,
)
from extrapolation.scenarios import COMMON_DEFAULTS

logger = logging.getLogger(__name__)

_ANCHORS = {
    **COMMON_DEFAULTS,
    "omega": "interval:0:1.5pi)",
    "xi": "interval:1.5pi:2pi",
    "basis": "anchor-frame",
    "snr_db": 35.0,
    "fillers": 7,
    "fillers_include_constant": True,
    "methods": ["next", "ls"],
}
ANCHORS_DEFAULTS = {**_ANCHORS, "scenario": "anchors"}
FAR_DOMAINS_DEFAULTS = {
    **_ANCHORS,
    "scenario": "far-domains",
    "anchor_set": "non-decaying",
    "distances": [1.0, 3.0, 7.0],
}


def target_function():
    """f(x) = 0.8^x - cos x + 2 sin 2x + 1/(x+1)."""
    return term("pow", 0.8) + term("cos", 1, weight=-1.0) + term("sin", 2, weight=2.0) + term("inv_shift")


def build_anchor_catalog(which):
    f = target_function()
    if which == "decaying":
        additions = [term("inv_shift", weight=2.0), term("sin_over_shift", weight=3.0), term("pow", 0.9)]
    elif which == "non-decaying":
        additions = [term("x", weight=0.1), term("sin_sq"), term("log_sq", weight=0.2)]
    else:
        raise ValueError(f"Unknown anchor set: {which}")
    return [f + extra for extra in additions]


def anchor_label(anchor):
    """Short tag 'f+<addition>' naming an anchor by what it adds to the target."""
    extra = anchor.terms[len(target_function().terms):]
    return "f+" + FunctionHandle(extra).tag if extra else "f"


def far_domain_shift(omega, base_xi, distance):
    """Xi moved so it starts `distance` past Omega's right end; width is kept."""
    if distance < 0:
        raise ValueError("Far-domain distance must be nonnegative")
    return base_xi.translated(omega.right + distance - base_xi.left)


def frames_for(sc, which):
    """{label suffix: frame}: anchors alone, and anchors plus fillers when configured."""
    anchors = build_anchor_catalog(which)
    frames = {which: make_anchor_frame(anchors)}
    n_fillers = int(sc.settings["fillers"])
    if n_fillers:
        fillers = trigonometric_terms(n_fillers, sc.settings["fillers_include_constant"])
        frames[f"{which}+fillers"] = make_anchor_frame(anchors, fillers)
    return frames


def _target_samples(sc, sample_points):
    f = target_function()
    values = add_noise(f(sample_points), sc.settings["snr_db"], sc.rng("target-noise"))
    return SampleSet(points=sample_points, values=values, snr_db=sc.settings["snr_db"])


def _check_frame(frame, omega, label, report):
    try:
        eigenvalues = check_rank(gram_matrix(omega, frame), what=f"frame '{label}'")
        ratio = float(eigenvalues[0] / eigenvalues[-1])
    except RankDeficiencyError as exc:
        logger.warning("  %s", exc)
        ratio = 0.0
    report.metadata.setdefault("frame_eigen_ratio", {})[label] = ratio


def score_anchor_rows(sc, report, setting, anchors, xi_points, omega_points, truth_xi, truth_omega):
    """One row per anchor: how far each anchor alone sits from the target."""
    best = None
    for anchor in anchors:
        row = MethodMetrics(method=f"anchor:{anchor_label(anchor)}", setting=setting)
        row.xi_rmse = rmse(truth_xi, anchor(xi_points))
        row.omega_rmse = rmse(truth_omega, anchor(omega_points))
        report.rows.append(row)
        best = row.xi_rmse if best is None else min(best, row.xi_rmse)
    return best


def score_frame(sc, report, setting, frame, omega, xi, samples, truth, stream, with_next=True):
    """Network (if configured) and LS rows for one frame on the target; returns {method: xi_rmse}."""
    xi_points, omega_points = eval_points_for(sc, xi), eval_points_for(sc, omega)
    truth_xi, truth_omega = truth(xi_points), truth(omega_points)
    kappa = condition_number(frame, omega, xi).kappa
    reference = projection_split(truth, frame, xi, allow_singular=True).coefficients
    _check_frame(frame, omega, setting, report)

    scores = {}
    for method in sc.methods:
        clock = {}
        row = MethodMetrics(method=method, setting=setting, kappa=kappa)
        if method == "next":
            if not with_next:
                continue
            gen_cfg = sc.gen_config(n_low=0, n_high=frame.dimension - 1)
            model = train_model(
                sc, report, f"next:{setting}", gen_cfg, sc.train_config(),
                frame, omega, xi, samples.points, sc.rng(f"train:{stream}"),
            )
            with stopwatch(sc, clock):
                coefficients = model.predict_coefficients(samples.values)
        elif method == "ls":
            with stopwatch(sc, clock):
                coefficients = fit_ls(samples, frame, sc.settings["ridge"]).coefficients
        else:
            continue
        row.xi_rmse = rmse(truth_xi, eval_function(frame, coefficients, xi_points))
        row.omega_rmse = rmse(truth_omega, eval_function(frame, coefficients, omega_points))
        row.coeff_rmse = rmse(reference, coefficients)
        row.wall_time_s = clock["elapsed"]
        report.rows.append(row)
        scores[method] = row.xi_rmse
    return scores


def score_pointwise_target(sc, report, setting, omega, xi, samples, truth):
    xi_points, omega_points = eval_points_for(sc, xi), eval_points_for(sc, omega)
    scores = {}
    for method, activation in POINTWISE_ACTIVATIONS.items():
        if method not in sc.methods:
            continue
        clock = {}
        with stopwatch(sc, clock):
            net = fit_pointwise(samples, sc.train_config(), activation, sc.rng(f"{method}:{setting}"))
        row = MethodMetrics(method=method, setting=setting, wall_time_s=clock["elapsed"])
        row.xi_rmse = rmse(truth(xi_points), predict_pointwise(net, xi_points))
        row.omega_rmse = rmse(truth(omega_points), predict_pointwise(net, omega_points))
        report.rows.append(row)
        scores[method] = row.xi_rmse
    return scores


def _record_set(report, which, anchor_best, frame_scores, pointwise_scores):
    """best LS frame plus reduction rates of the network over LS and over the closest anchor."""
    ls_scores = {label: s["ls"] for label, s in frame_scores.items() if "ls" in s}
    summary = {"best_anchor_xi_rmse": anchor_best}
    if ls_scores:
        best_label = min(ls_scores, key=ls_scores.get)
        summary["best_ls_frame"] = best_label
        summary["best_ls_xi_rmse"] = ls_scores[best_label]
    rates = {}
    for label, scores in frame_scores.items():
        if "next" not in scores:
            continue
        if "ls" in scores:
            rates[f"next_vs_ls:{label}"] = reduction_rate(scores["ls"], scores["next"])
        if ls_scores:
            rates[f"next_vs_best_ls:{label}"] = reduction_rate(summary["best_ls_xi_rmse"], scores["next"])
        rates[f"next_vs_best_anchor:{label}"] = reduction_rate(anchor_best, scores["next"])
        for method, score in pointwise_scores.items():
            rates[f"next_vs_{method}:{label}"] = reduction_rate(score, scores["next"])
    summary["reduction_rate"] = rates
    report.metadata.setdefault("anchor_sets", {})[which] = summary


def run_anchors(sc, report):
    """Both anchor sets, each with and without fillers."""
    omega, xi = sc.domain("omega"), sc.domain("xi")
    truth = target_function()
    samples = _target_samples(sc, sample_points_for(sc, omega))
    xi_points, omega_points = eval_points_for(sc, xi), eval_points_for(sc, omega)

    sets = [sc.settings["anchor_set"]] if "anchor_set" in sc.settings else list(config.ANCHOR_SETS)
    pointwise_scores = score_pointwise_target(sc, report, "target", omega, xi, samples, truth)
    for which in sets:
        anchor_best = score_anchor_rows(
            sc, report, which, build_anchor_catalog(which), xi_points, omega_points, truth(xi_points), truth(omega_points)
        )
        frame_scores = {
            label: score_frame(sc, report, label, frame, omega, xi, samples, truth, label)
            for label, frame in frames_for(sc, which).items()
        }
        _record_set(report, which, anchor_best, frame_scores, pointwise_scores)


def run_far_domains(sc, report):
    """Xi shifted away from Omega by each configured distance."""
    omega, base_xi = sc.domain("omega"), sc.domain("xi")
    truth = target_function()
    samples = _target_samples(sc, sample_points_for(sc, omega))
    which = sc.settings["anchor_set"]
    anchors = build_anchor_catalog(which)

    for distance in sc.settings["distances"]:
        xi = far_domain_shift(omega, base_xi, float(distance))
        prefix = f"distance={float(distance):g}"
        xi_points, omega_points = eval_points_for(sc, xi), eval_points_for(sc, omega)
        anchor_best = score_anchor_rows(
            sc, report, prefix, anchors, xi_points, omega_points, truth(xi_points), truth(omega_points)
        )
        pointwise_scores = score_pointwise_target(sc, report, prefix, omega, xi, samples, truth)
        frame_scores = {}
        for label, frame in frames_for(sc, which).items():
            setting = f"{prefix}/{label}"
            frame_scores[label] = score_frame(
                sc, report, setting, frame, omega, xi, samples, truth, setting, with_next=label.endswith("+fillers")
            )
        _record_set(report, prefix, anchor_best, frame_scores, pointwise_scores)
        report.metadata.setdefault("xi_domains", {})[prefix] = xi.describe()

