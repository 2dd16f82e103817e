import json

import pytest

import extrap
from extrapolation.errors import DivergenceError
from extrapolation.pipeline.io import load_model, load_report
from extrapolation.pipeline.metrics import MethodMetrics
from extrapolation.runner import ExperimentReport

TINY = {
    "n_samples": 20,
    "n_eval": 50,
    "batch_size": 4,
    "hidden_sizes": [8],
    "max_steps": 5,
    "min_steps": 0,
    "window": 5,
    "log_every": 0,
    "validation_count": 3,
    "validation_sets": [3],
}


def write_config(tmp_path, **values):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(values))
    return path


def test_condition_number_prints_json(capsys):
    code = extrap.main([
        "condition-number", "--basis", "chebyshev", "--degree", "0",
        "--omega", "interval:-1:0.5)", "--xi", "interval:0.5:1",
    ])
    assert code == 0
    record = json.loads(capsys.readouterr().out)
    assert record["kappa"] == pytest.approx(1 / 3)
    assert record["orthogonalized"] is False


def test_condition_number_orthogonalized_frame(capsys):
    code = extrap.main([
        "condition-number", "--basis", "anchor-frame", "--anchor-set", "non-decaying", "--fillers", "2",
        "--omega", "interval:0:1.5pi)", "--xi", "interval:1.5pi:2pi", "--orthogonalize",
    ])
    assert code == 0
    record = json.loads(capsys.readouterr().out)
    assert record["d"] == 5
    assert record["omega_norms"] == pytest.approx([1.0] * 5)


def test_bad_domain_is_a_numerical_failure(capsys):
    code = extrap.main(["condition-number", "--basis", "chebyshev", "--omega", "interval:1:0", "--xi", "interval:0:1"])
    assert code == 2
    assert "DomainError" in capsys.readouterr().err


def test_gradcheck_passes(capsys):
    assert extrap.main(["gradcheck", "--seed", "3"]) == 0
    assert set(json.loads(capsys.readouterr().out)) == {"relu", "tanh", "snake"}


def test_run_writes_report_models_and_log(tmp_path, mocker):
    report = ExperimentReport(scenario="cheb-noisy", seed=5, settings={"scenario": "cheb-noisy", "seed": 5})
    report.rows.append(MethodMetrics(method="ls", setting="degree=3", xi_rmse=0.3, coeff_rmse=0.2, omega_rmse=0.01))
    run = mocker.patch("extrap.run_scenario", return_value=report)

    code = extrap.main(["run", "--scenario", "cheb-noisy", "--seed", "5", "--out", str(tmp_path), "--no-timings"])

    assert code == 0
    scenario = run.call_args.args[0]
    assert scenario.seed == 5 and scenario.timings is False
    rows = load_report(tmp_path / "cheb-noisy-report.csv")
    assert rows[0]["method"] == "ls"
    log_text = (tmp_path / "extrap-log.txt").read_text()
    assert "--- New Run ---" in log_text
    assert "SCENARIO SUMMARY" in log_text


def test_run_twice_without_timings_writes_identical_files(tmp_path):
    cfg = write_config(tmp_path, scenario="cheb-noisy", seed=5, **TINY, methods=["next", "ls", "relu-net"],
                       pointwise_steps=5)
    contents = []
    for run in ("first", "second"):
        out = tmp_path / run
        argv = ["run", "--scenario", "cheb-noisy", "--config", str(cfg), "--out", str(out), "--no-timings"]
        assert extrap.main(argv) == 0
        contents.append([
            (out / name).read_bytes()
            for name in ("cheb-noisy-report.csv", "cheb-noisy-report.meta.json", "cheb-noisy-next.model.json")
        ])
    assert contents[0] == contents[1]

    rows = load_report(tmp_path / "first" / "cheb-noisy-report.csv")
    assert {row["wall_time_s"] for row in rows} == {0.0}
    meta = json.loads(contents[0][1])
    assert meta["training"]["next"]["train_time_s"] == 0.0


def test_run_failure_exits_nonzero(tmp_path, mocker):
    mocker.patch("extrap.run_scenario", side_effect=DivergenceError("loss became nan"))
    code = extrap.main(["run", "--scenario", "cheb-noisy", "--seed", "1", "--out", str(tmp_path)])
    assert code == 2
    assert "Scenario cheb-noisy failed" in (tmp_path / "extrap-log.txt").read_text()


def test_run_config_errors_exit_one(tmp_path, capsys):
    cfg = write_config(tmp_path, scenario="cheb-noisy", seed=1, colour="red")
    assert extrap.main(["run", "--scenario", "cheb-noisy", "--config", str(cfg), "--out", str(tmp_path)]) == 1
    assert "colour" in capsys.readouterr().err

    other = write_config(tmp_path, scenario="anchors", seed=1)
    assert extrap.main(["run", "--scenario", "cheb-noisy", "--config", str(other), "--out", str(tmp_path)]) == 1
    assert extrap.main(["run", "--scenario", "cheb-noisy", "--out", str(tmp_path)]) == 1


def test_train_writes_a_loadable_model(tmp_path):
    cfg = write_config(tmp_path, scenario="cheb-noisy", seed=2, **TINY)
    out = tmp_path / "models" / "next.json"
    assert extrap.main(["train", "--config", str(cfg), "--out", str(out)]) == 0
    model = load_model(out)
    assert model.net.sizes == [20, 8, 8]
    assert model.seed == 2


def test_ls_fit_recovers_noiseless_samples(tmp_path):
    cfg = write_config(tmp_path, scenario="cheb-noisy", seed=4, snr_db=None)
    assert extrap.main(["ls-fit", "--config", str(cfg), "--out", str(tmp_path)]) == 0
    record = json.loads((tmp_path / "ls-fit.json").read_text())
    assert record["xi_rmse"] < 1e-6
    assert not record["rank_deficient"]

    assert extrap.main([
        "ls-fit", "--config", str(cfg), "--samples", str(tmp_path / "ls-fit-samples.csv"), "--out", str(tmp_path / "again"),
    ]) == 0
    again = json.loads((tmp_path / "again" / "ls-fit.json").read_text())
    assert again["coefficients"] == pytest.approx(record["coefficients"], abs=1e-9)
    assert "xi_rmse" not in again


def test_model_filename_is_path_safe():
    assert extrap.model_filename("far-domains", "next:distance=1/non-decaying+fillers") == (
        "far-domains-next_distance=1_non-decaying+fillers.model.json"
    )
