import numpy as np
import pytest

from extrapolation import runner
from extrapolation.analysis import condition_number
from extrapolation.bases import chebyshev, eval_function
from extrapolation.datagen import stack_batch
from extrapolation.pipeline.io import emit_report, load_model, save_model
from extrapolation.runner import (
    build_scenario,
    eval_points_for,
    rmse,
    run_scenario,
    sample_points_for,
    validation_pairs,
)

TINY = {
    "n_samples": 20,
    "n_eval": 200,
    "batch_size": 4,
    "hidden_sizes": [8],
    "max_steps": 6,
    "min_steps": 0,
    "window": 5,
    "log_every": 0,
    "pointwise_steps": 5,
    "validation_count": 4,
}


def tiny(scenario, **overrides):
    return build_scenario({"scenario": scenario, "seed": 11, **TINY, **overrides})


def settings_of(report, method):
    return [row.setting for row in report.rows if row.method == method]


def test_same_seed_gives_identical_report_files(tmp_path):
    texts = []
    for run in ("first", "second"):
        sc = build_scenario(
            {"scenario": "cheb-noisy", "seed": 11, **TINY, "validation_sets": [3, 5], "methods": ["next", "ls", "relu-net"]},
            timings=False,
        )
        csv_path, meta_path = emit_report(run_scenario(sc), tmp_path / run)
        texts.append((csv_path.read_bytes(), meta_path.read_bytes()))
    assert texts[0] == texts[1]

    other = run_scenario(tiny("cheb-noisy", validation_sets=[3, 5], methods=["next", "ls", "relu-net"], seed=12))
    csv_path, _ = emit_report(other, tmp_path / "other")
    assert csv_path.read_bytes() != texts[0][0]


def test_next_xi_rmse_goes_through_predict_extrapolation(mocker):
    spy = mocker.spy(runner, "predict_extrapolation")
    report = run_scenario(tiny("cheb-noisy", validation_sets=[3], methods=["next", "ls"]))
    assert spy.call_count == TINY["validation_count"]
    assert report.find("next", "degree=3").xi_rmse >= 0


def test_cheb_noisy_rows_kappa_and_model_replay(tmp_path):
    sc = tiny("cheb-noisy", validation_sets=[3, 5, 7])
    report = run_scenario(sc)
    assert settings_of(report, "next") == ["degree=3", "degree=5", "degree=7"]
    assert settings_of(report, "ls") == ["degree=3", "degree=5", "degree=7"]

    omega, xi = sc.domain("omega"), sc.domain("xi")
    kappa = condition_number(chebyshev(7), omega, xi).kappa
    for row in report.rows:
        assert row.kappa == pytest.approx(kappa, rel=1e-12)
        assert row.xi_rmse >= 0 and row.coeff_rmse >= 0 and row.omega_rmse >= 0
    assert "next_vs_ls" in report.metadata["reduction_rate"]["degree=3"]

    model = load_model(save_model(report.models["next"], tmp_path / "next.json"))
    family = model.family
    pairs = validation_pairs(sc, family, sample_points_for(sc, omega), "validation:3", n_high=3, monotone=False)
    values, truth = stack_batch(pairs)
    xi_points = eval_points_for(sc, xi)
    predicted = model.predict_coefficients(values)
    replayed = np.mean([
        rmse(eval_function(family, t, xi_points), eval_function(family, p, xi_points))
        for t, p in zip(truth, predicted)
    ])
    assert replayed == pytest.approx(report.find("next", "degree=3").xi_rmse, abs=1e-12)


def test_cheb_monotone_reports_both_models():
    report = run_scenario(tiny("cheb-monotone", validation_sets=[3, 7]))
    assert settings_of(report, "next-monotone") == ["degree=3", "degree=7"]
    assert settings_of(report, "next-whole") == ["degree=3", "degree=7"]
    assert set(report.metadata["training"]) == {"next-monotone", "next-whole"}
    rates = report.metadata["reduction_rate"]["degree=7"]
    assert set(rates) == {"next-monotone_vs_ls", "next-whole_vs_ls"}


def test_noise_sweep_settings():
    report = run_scenario(tiny("noise-sweep", eval_snr_db=[None, 50.0, 20.0], methods=["ls"]))
    assert settings_of(report, "ls") == ["snr=inf", "snr=50", "snr=20"]
    clean = report.find("ls", "snr=inf").xi_rmse
    assert clean < 1e-6
    assert report.find("ls", "snr=20").xi_rmse > clean
    assert report.metadata["trained_snr_db"] == 35.0


def test_anchors_scenario_rows_and_summary():
    report = run_scenario(tiny("anchors", methods=["next", "ls", "relu-net"]))
    anchor_rows = [row for row in report.rows if row.method.startswith("anchor:")]
    assert len(anchor_rows) == 6
    assert report.find("anchor:f+0.1*x", "non-decaying").xi_rmse == pytest.approx(0.552, abs=0.02)
    assert report.find("anchor:f+2*1/(x+1)", "decaying").xi_rmse == pytest.approx(0.310, abs=0.02)

    for label in ("decaying", "decaying+fillers", "non-decaying", "non-decaying+fillers"):
        assert report.find("ls", label).coeff_rmse is not None
        assert report.find("next", label).xi_rmse >= 0
    assert report.find("relu-net", "target").coeff_rmse is None

    summary = report.metadata["anchor_sets"]["non-decaying"]
    assert summary["best_ls_frame"] in ("non-decaying", "non-decaying+fillers")
    assert "next_vs_best_anchor:non-decaying+fillers" in summary["reduction_rate"]
    assert set(report.metadata["frame_eigen_ratio"]) == {
        "decaying", "decaying+fillers", "non-decaying", "non-decaying+fillers",
    }


def test_far_domains_trains_only_on_the_filled_frame():
    report = run_scenario(tiny("far-domains", distances=[1.0, 3.0]))
    assert settings_of(report, "next") == ["distance=1/non-decaying+fillers", "distance=3/non-decaying+fillers"]
    assert settings_of(report, "ls") == [
        "distance=1/non-decaying", "distance=1/non-decaying+fillers",
        "distance=3/non-decaying", "distance=3/non-decaying+fillers",
    ]
    xi = report.metadata["xi_domains"]["distance=1"]
    assert xi.startswith("interval:")
    assert "best_ls_frame" in report.metadata["anchor_sets"]["distance=3"]


def test_sphere_scenario_rows():
    sc = tiny("sphere", n_samples=36)
    report = run_scenario(sc)
    assert settings_of(report, "ls") == ["coefficients=5", "coefficients=9"]
    assert settings_of(report, "next") == ["coefficients=5", "coefficients=9"]
    assert report.models["next"].net.sizes == [36, 8, 9]
    assert report.metadata["basis"]["dimension"] == 9
    assert report.find("ls", "coefficients=9").xi_rmse < 1e-4


def test_pointwise_methods_are_skipped_on_the_sphere():
    report = run_scenario(tiny("sphere", n_samples=16, methods=["ls", "snake-net"]))
    assert settings_of(report, "snake-net") == []
