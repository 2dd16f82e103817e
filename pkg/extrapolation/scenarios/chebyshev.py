"""Chebyshev scenarios on Omega = [-1, 0.5), Xi = [0.5, 1]: noisy, monotone, noise sweep."""
import logging

import numpy as np

from extrapolation.analysis import condition_number
from extrapolation.bases import chebyshev
from extrapolation.runner import (
    record_reductions,
    sample_points_for,
    score_coefficient_methods,
    train_model,
    validation_pairs,
)
from extrapolation.scenarios import COMMON_DEFAULTS

logger = logging.getLogger(__name__)

_CHEBYSHEV = {
    **COMMON_DEFAULTS,
    "omega": "interval:-1:0.5)",
    "xi": "interval:0.5:1",
    "basis": "chebyshev",
    "degree": 7,
    "n_high": 7,
    "snr_db": 35.0,
    "methods": ["next", "ls"],
    "validation_sets": [3, 5, 7],
}

CHEB_NOISY_DEFAULTS = {**_CHEBYSHEV, "scenario": "cheb-noisy"}
CHEB_MONOTONE_DEFAULTS = {
    **_CHEBYSHEV,
    "scenario": "cheb-monotone",
    "monotone": True,
    "n_high": 6,
    "lambda_ext": 1.0,
}
NOISE_SWEEP_DEFAULTS = {
    **_CHEBYSHEV,
    "scenario": "noise-sweep",
    "validation_sets": [5],
    "eval_snr_db": [None, 50.0, 40.0, 35.0, 30.0, 20.0],
}


def _setup(sc, report):
    omega, xi = sc.domain("omega"), sc.domain("xi")
    family = chebyshev(int(sc.settings["degree"]))
    kappa = condition_number(family, omega, xi).kappa
    report.metadata["kappa"] = kappa
    report.metadata["basis"] = family.to_record()
    return omega, xi, family, kappa, sample_points_for(sc, omega)


def run_cheb_noisy(sc, report):
    """Train once on the full space, validate on one set per degree."""
    omega, xi, family, kappa, sample_points = _setup(sc, report)
    models = {}
    if "next" in sc.methods:
        models["next"] = train_model(
            sc, report, "next", sc.gen_config(), sc.train_config(), family, omega, xi, sample_points, sc.rng("train")
        )

    for degree in sc.settings["validation_sets"]:
        setting = f"degree={degree}"
        pairs = validation_pairs(sc, family, sample_points, f"validation:{degree}", n_high=int(degree), monotone=False)
        score_coefficient_methods(
            sc, report, setting, family, omega, xi, pairs, models, kappa, sc.settings["ridge"]
        )
        record_reductions(report, setting)


def run_cheb_monotone(sc, report):
    """Monotone-trained and whole-space networks against LS on monotone sets.

    Validation degree k integrates a derivative of degree k - 1.
    """
    omega, xi, family, kappa, sample_points = _setup(sc, report)
    degree = int(sc.settings["degree"])
    models = {}
    if "next" in sc.methods:
        models["next-monotone"] = train_model(
            sc, report, "next-monotone",
            sc.gen_config(monotone=True, n_high=degree - 1),
            sc.train_config(),
            family, omega, xi, sample_points, sc.rng("train:monotone"),
        )
        models["next-whole"] = train_model(
            sc, report, "next-whole",
            sc.gen_config(monotone=False, n_high=degree),
            sc.train_config(lambda_ext=0.0),
            family, omega, xi, sample_points, sc.rng("train:whole"),
        )

    for k in sc.settings["validation_sets"]:
        setting = f"degree={k}"
        pairs = validation_pairs(sc, family, sample_points, f"validation:{k}", n_high=int(k) - 1, monotone=True)
        score_coefficient_methods(
            sc, report, setting, family, omega, xi, pairs, models, kappa, sc.settings["ridge"]
        )
        record_reductions(report, setting)


def snr_label(snr_db):
    return "snr=inf" if snr_db is None or np.isinf(snr_db) else f"snr={snr_db:g}"


def run_noise_sweep(sc, report):
    """One network trained at the configured SNR, scored at every evaluation SNR.

    Each SNR level reuses the same validation functions; only the noise differs.
    """
    omega, xi, family, kappa, sample_points = _setup(sc, report)
    models = {}
    if "next" in sc.methods:
        models["next"] = train_model(
            sc, report, "next", sc.gen_config(), sc.train_config(), family, omega, xi, sample_points, sc.rng("train")
        )

    degree = int(sc.settings["validation_sets"][0])
    for snr_db in sc.settings["eval_snr_db"]:
        setting = snr_label(snr_db)
        pairs = validation_pairs(sc, family, sample_points, f"validation:{degree}", n_high=degree, snr_db=snr_db, monotone=False)
        score_coefficient_methods(
            sc, report, setting, family, omega, xi, pairs, models, kappa, sc.settings["ridge"]
        )
        record_reductions(report, setting)
    report.metadata["trained_snr_db"] = sc.settings["snr_db"]
