"""Full-budget scenario runs; minutes each, so only with EXTRAP_RUN_SLOW=1."""
import os

import pytest

from extrapolation.runner import build_scenario, run_scenario

pytestmark = pytest.mark.skipif(
    os.environ.get("EXTRAP_RUN_SLOW") != "1", reason="set EXTRAP_RUN_SLOW=1 to run full scenarios"
)


def test_cheb_noisy_next_beats_ls_at_snr_35():
    report = run_scenario(build_scenario({"scenario": "cheb-noisy", "seed": 0, "validation_sets": [3]}))
    next_rmse = report.find("next", "degree=3").xi_rmse
    ls_rmse = report.find("ls", "degree=3").xi_rmse
    assert next_rmse < 0.5 * ls_rmse
    assert next_rmse < 0.15


def test_monotone_model_beats_whole_space_model():
    report = run_scenario(build_scenario({"scenario": "cheb-monotone", "seed": 0, "validation_sets": [7]}))
    assert report.find("next-monotone", "degree=7").xi_rmse < report.find("next-whole", "degree=7").xi_rmse


def test_anchor_frame_beats_the_best_anchor():
    report = run_scenario(build_scenario({"scenario": "anchors", "seed": 0}))
    assert report.find("next", "non-decaying+fillers").xi_rmse < 0.40
    assert report.find("ls", "decaying+fillers").xi_rmse > report.find("ls", "decaying").xi_rmse


def test_sphere_next_beats_ls():
    report = run_scenario(build_scenario({"scenario": "sphere", "seed": 0, "snr_db": 35.0}))
    assert report.find("next", "coefficients=9").xi_rmse < report.find("ls", "coefficients=9").xi_rmse
