"""Real spherical harmonics up to degree 2, sampled on the bottom third of the
sphere and extrapolated to the upper hemisphere."""
import logging

from extrapolation.analysis import condition_number
from extrapolation.bases import spherical_harmonics
from extrapolation.runner import (
    record_reductions,
    sample_points_for,
    score_coefficient_methods,
    train_model,
    validation_pairs,
)
from extrapolation.scenarios import COMMON_DEFAULTS

logger = logging.getLogger(__name__)

SPHERE_DEFAULTS = {
    **COMMON_DEFAULTS,
    "scenario": "sphere",
    "omega": "sphere-z:-1:-1/3",
    "xi": "sphere-z:0:1",
    "basis": "spherical-harmonic",
    "degree": 2,
    "n_high": 8,
    "snr_db": None,
    "methods": ["next", "ls"],
    # highest active coefficient index per validation set: 5 and 9 coefficients
    "validation_sets": [4, 8],
}


def coefficients_label(n_high):
    return f"coefficients={int(n_high) + 1}"


def run_sphere(sc, report):
    omega, xi = sc.domain("omega"), sc.domain("xi")
    if not (omega.spherical and xi.spherical):
        raise ValueError("The sphere scenario needs spherical omega and xi descriptors")

    family = spherical_harmonics(int(sc.settings["degree"]))
    kappa = condition_number(family, omega, xi).kappa
    report.metadata["kappa"] = kappa
    report.metadata["basis"] = family.to_record()
    sample_points = sample_points_for(sc, omega)
    logger.info("Sphere family: d=%d, %d sample points, kappa=%.4g", family.dimension, len(sample_points), kappa)

    models = {}
    if "next" in sc.methods:
        models["next"] = train_model(
            sc, report, "next", sc.gen_config(), sc.train_config(), family, omega, xi, sample_points, sc.rng("train")
        )

    for n_high in sc.settings["validation_sets"]:
        setting = coefficients_label(n_high)
        pairs = validation_pairs(sc, family, sample_points, f"validation:{n_high}", n_high=int(n_high), monotone=False)
        score_coefficient_methods(
            sc, report, setting, family, omega, xi, pairs, models, kappa, sc.settings["ridge"]
        )
        record_reductions(report, setting)
