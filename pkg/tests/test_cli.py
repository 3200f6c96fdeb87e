"""Command-line surface: verbs, artifacts, exit codes, reproducibility."""

import json

import numpy as np
import pytest

from dctnet.cli import main
from dctnet.network import init_network, load_model, save_model
from tests.conftest import random_adaptive_model

TINY = ["--train-size", "1500", "--test-size", "400"]


def run(argv) -> int:
    return main([str(a) for a in argv])


class TestDatasetCommand:
    def test_writes_csv_and_manifest(self, tmp_path):
        out = tmp_path / "ds"
        assert run(["dataset", "--problem", "p1", "--n", "50", "--seed", "7", "--out", out]) == 0
        csv_path = out / "dataset.csv"
        manifest = json.loads((csv_path.parent / "dataset.csv.manifest.json").read_text())
        assert manifest["problem"] == "p1" and manifest["n"] == 50 and manifest["seed"] == 7
        assert csv_path.read_text().splitlines()[0] == "x1,x2,y"

    def test_repeat_is_byte_identical(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        run(["dataset", "--problem", "p5", "--n", "200", "--seed", "3", "--out", a])
        run(["dataset", "--problem", "p5", "--n", "200", "--seed", "3", "--out", b])
        assert (a / "dataset.csv").read_bytes() == (b / "dataset.csv").read_bytes()


class TestTrainCommand:
    def test_classification_artifacts(self, tmp_path):
        out = tmp_path / "run"
        code = run(["train", "--problem", "p1", "--model", "enn", "--out", out, "--seed", "5", *TINY])
        assert code == 0
        metrics = json.loads((out / "metrics.json").read_text())
        assert metrics["schema"] == 1
        assert metrics["metric"] == "accuracy"
        assert metrics["train_size"] == 1500 and metrics["test_size"] == 400
        assert metrics["iterations"] == 1500
        assert metrics["wall_time"] is None
        assert 0.5 <= metrics["value"] <= 1.0
        model = load_model(out / "model.json")
        assert model.kind == "enn"
        report_lines = (out / "train_report.csv").read_text().splitlines()
        assert report_lines[0] == "epoch,running_mse"

    def test_regression_uses_mse(self, tmp_path):
        out = tmp_path / "reg"
        code = run(["train", "--problem", "quarter-sum-squares", "--model", "relu", "--out", out, *TINY])
        assert code == 0
        metrics = json.loads((out / "metrics.json").read_text())
        assert metrics["metric"] == "mse" and metrics["value"] >= 0.0

    def test_invalid_problem_fails_before_output(self, tmp_path, capsys):
        out = tmp_path / "nope"
        code = run(["train", "--problem", "p1", "--model", "enn", "--out", out, "--q", "7", *TINY])
        assert code == 2
        assert not (out / "metrics.json").exists()

    def test_config_file_with_flag_override(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"problem": "p2", "model": "sigm", "train_size": 800, "test_size": 300}))
        out = tmp_path / "cfgrun"
        assert run(["train", "--config", cfg, "--out", out, "--model", "relu"]) == 0
        metrics = json.loads((out / "metrics.json").read_text())
        assert metrics["problem"] == "p2" and metrics["model"] == "relu"
        assert metrics["train_size"] == 800

    def test_unknown_config_key_rejected(self, tmp_path):
        cfg = tmp_path / "bad.json"
        cfg.write_text(json.dumps({"problme": "p2"}))
        assert run(["train", "--config", cfg, "--out", tmp_path / "x"]) == 2


class TestTableCommand:
    def test_classification_sweep_shape(self, tmp_path):
        out = tmp_path / "table"
        code = run(
            ["table", "--task", "classification", "--problems", "p1", "p2",
             "--models", "enn", "relu", "--out", out, "--train-size", "600", "--test-size", "200"]
        )
        assert code == 0
        lines = (out / "table.csv").read_text().strip().splitlines()
        assert lines[0] == "problem,model,metric"
        assert len(lines) == 1 + 4
        cells = {tuple(line.split(",")[:2]) for line in lines[1:]}
        assert cells == {("p1", "enn"), ("p1", "relu"), ("p2", "enn"), ("p2", "relu")}

    def test_full_grid_row_counts(self, tmp_path):
        out = tmp_path / "grid"
        code = run(["table", "--task", "regression", "--out", out, "--train-size", "300", "--test-size", "100"])
        assert code == 0
        lines = (out / "table.csv").read_text().strip().splitlines()
        assert len(lines) == 1 + 3 * 4  # 3 targets x 4 models

    def test_mismatched_problem_task_rejected(self, tmp_path):
        code = run(["table", "--task", "regression", "--problems", "p1", "--out", tmp_path / "x",
                    "--train-size", "100", "--test-size", "50"])
        assert code == 2


class TestExportCommand:
    @pytest.fixture()
    def model_file(self, tmp_path):
        rng = np.random.default_rng(0)
        path = tmp_path / "model.json"
        save_model(random_adaptive_model(rng), path)
        return path

    def test_bumps_write_csv_and_pgm_per_neuron(self, tmp_path, model_file):
        out = tmp_path / "bumps"
        assert run(["export", model_file, "--what", "bumps", "--out", out, "--resolution", "21"]) == 0
        assert len(list(out.glob("bump_*.csv"))) == 6
        assert len(list(out.glob("bump_*.pgm"))) == 6

    def test_map_pixel_count(self, tmp_path, model_file):
        out = tmp_path / "map"
        assert run(["export", model_file, "--what", "map", "--out", out, "--resolution", "33"]) == 0
        pixels = (out / "decision_map.pgm").read_bytes().rsplit(b"255\n", 1)[1]
        assert len(pixels) == 33 * 33

    def test_redundancy_on_duplicate_fixture(self, tmp_path):
        from tests.test_analysis import duplicated_neuron_net

        path = tmp_path / "dup.json"
        save_model(duplicated_neuron_net(-1.0), path)
        out = tmp_path / "red"
        assert run(["export", path, "--what", "redundancy", "--out", out, "--resolution", "41"]) == 0
        lines = (out / "redundancy.csv").read_text().strip().splitlines()
        assert lines[0] == "first,second,correlation,weight_sign_product,cancelling"
        assert len(lines) == 2
        assert lines[1].startswith("1,2,") and lines[1].endswith(",1")

    def test_activations_with_dataset_ranges(self, tmp_path, model_file):
        data_dir = tmp_path / "ds"
        run(["dataset", "--problem", "p1", "--n", "100", "--seed", "1", "--out", data_dir])
        out = tmp_path / "acts"
        assert run(["export", model_file, "--what", "activations", "--out", out,
                    "--dataset", data_dir / "dataset.csv"]) == 0
        assert (out / "operating_ranges.csv").exists()
        assert (out / "activation_hidden_3.csv").exists()

    def test_unknown_export_kind_exits_nonzero(self, tmp_path, model_file):
        with pytest.raises(SystemExit) as info:
            run(["export", model_file, "--what", "everything", "--out", tmp_path / "x"])
        assert info.value.code == 2

    def test_missing_model_file(self, tmp_path):
        assert run(["export", tmp_path / "absent.json", "--what", "map", "--out", tmp_path / "x"]) == 2


class TestGradcheckCommand:
    def test_passes_and_prints_max_deviation(self, capsys):
        assert run(["gradcheck", "--trials", "5", "--seed", "0"]) == 0
        out = capsys.readouterr().out
        assert "max relative deviation" in out

    def test_deterministic_output(self, capsys):
        run(["gradcheck", "--trials", "4", "--seed", "9"])
        first = capsys.readouterr().out
        run(["gradcheck", "--trials", "4", "--seed", "9"])
        assert capsys.readouterr().out == first

    def test_sign_flip_detected(self, capsys):
        assert run(["gradcheck", "--trials", "3", "--seed", "0", "--flip-sign", "output_coeff"]) == 1


class TestReproducibility:
    def test_train_command_byte_identical(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        argv = ["train", "--problem", "p3", "--model", "fdct", "--seed", "21", *TINY]
        assert run([*argv, "--out", a]) == 0
        assert run([*argv, "--out", b]) == 0
        for name in ("model.json", "train_report.csv", "metrics.json"):
            assert (a / name).read_bytes() == (b / name).read_bytes(), name

    def test_export_byte_identical(self, tmp_path):
        model_path = tmp_path / "m.json"
        save_model(init_network(seed=3), model_path)
        a, b = tmp_path / "ea", tmp_path / "eb"
        for out in (a, b):
            run(["export", model_path, "--what", "response", "--out", out, "--resolution", "31"])
        assert (a / "response.pgm").read_bytes() == (b / "response.pgm").read_bytes()
        assert (a / "response.csv").read_bytes() == (b / "response.csv").read_bytes()
