"""End-to-end runs of the soat CLI on a tiny dataset."""

import json

import pytest

from apps.cli.main import main
from core.data import JsonlReportRepository
from tests.conftest import TINY_ENV, TINY_MODEL, TINY_TRAIN


@pytest.fixture
def config(tmp_path):
    path = tmp_path / "tiny.env"
    values = {**TINY_ENV, **TINY_MODEL, **TINY_TRAIN, "seed": 3}
    path.write_text("".join(f"{k}={v}\n" for k, v in values.items()), encoding="utf-8")
    return path


@pytest.fixture
def data_dir(tmp_path, config):
    out = tmp_path / "data"
    assert main(["gen-env", "--config", str(config), "--out", str(out)]) == 0
    return out


def _train(config, data_dir, out, *extra):
    return main(["train", "--config", str(config), "--dataset", str(data_dir), "--out", str(out), *extra])


class TestGenEnv:
    def test_writes_dataset(self, data_dir):
        assert (data_dir / "manifest.json").is_file()
        assert (data_dir / "resolved_config.env").is_file()
        assert not (data_dir / "runs.jsonl").exists()
        runs = (data_dir.parent / "data.runs.jsonl").read_text().splitlines()
        assert json.loads(runs[-1])["status"] == "success"

    def test_refuses_to_overwrite(self, config, data_dir):
        assert main(["gen-env", "--config", str(config), "--out", str(data_dir)]) == 3
        assert main(["gen-env", "--config", str(config), "--out", str(data_dir), "--force"]) == 0

    def test_rerun_gives_identical_directory(self, config, tmp_path):
        out = tmp_path / "regen"

        def snapshot():
            assert main(["gen-env", "--config", str(config), "--out", str(out), "--force"]) == 0
            return {p.name: p.read_bytes() for p in sorted(out.iterdir())}

        first = snapshot()
        assert first == snapshot()
        assert len((tmp_path / "regen.runs.jsonl").read_text().splitlines()) == 2


class TestTrain:
    def test_training_log_is_reproducible(self, config, data_dir, tmp_path):
        assert _train(config, data_dir, tmp_path / "a") == 0
        assert _train(config, data_dir, tmp_path / "b") == 0
        log_a = (tmp_path / "a" / "training_log.jsonl").read_bytes()
        assert log_a == (tmp_path / "b" / "training_log.jsonl").read_bytes()
        assert (tmp_path / "a" / "checkpoints" / "latest.npz").is_file()
        assert (tmp_path / "a" / "resolved_config.env").is_file()

    def test_resume(self, config, data_dir, tmp_path):
        assert _train(config, data_dir, tmp_path / "full") == 0
        assert _train(config, data_dir, tmp_path / "cut", "--iterations", "1") == 0
        assert _train(config, data_dir, tmp_path / "cut", "--resume") == 0
        full = (tmp_path / "full" / "training_log.jsonl").read_bytes()
        assert full == (tmp_path / "cut" / "training_log.jsonl").read_bytes()

    def test_resume_without_checkpoint(self, config, data_dir, tmp_path):
        assert _train(config, data_dir, tmp_path / "empty", "--resume") == 3


class TestEval:
    def test_model_report_is_deterministic(self, config, data_dir, tmp_path):
        out = tmp_path / "run"
        assert _train(config, data_dir, out) == 0
        args = ["eval", "--config", str(config), "--dataset", str(data_dir), "--out", str(out), "--split", "val_seen"]
        assert main([*args, "--report", str(out / "first.jsonl")]) == 0
        assert main([*args, "--report", str(out / "second.jsonl")]) == 0
        assert (out / "first.jsonl").read_bytes() == (out / "second.jsonl").read_bytes()

    def test_teacher_report_and_comparison(self, config, data_dir, tmp_path):
        out = tmp_path / "ref"
        base = ["eval", "--config", str(config), "--dataset", str(data_dir), "--out", str(out)]
        assert main([*base, "--policy", "random", "--report", str(out / "random.jsonl")]) == 0
        assert main([*base, "--policy", "teacher", "--baseline-report", str(out / "random.jsonl")]) == 0

        report = JsonlReportRepository().load(out / "report_val_unseen.jsonl")
        assert report.aggregate.success_rate == 1.0
        comparison = json.loads((out / "report_val_unseen_comparison.json").read_text())
        assert comparison["split"] == "val_unseen"


class TestErrors:
    def test_unknown_config_key(self, tmp_path):
        path = tmp_path / "bad.env"
        path.write_text("learning_rat=0.1\n")
        assert main(["train", "--config", str(path), "--out", str(tmp_path / "x")]) == 2

    def test_missing_dataset(self, config, tmp_path):
        assert _train(config, tmp_path / "nowhere", tmp_path / "x") == 3

    def test_checkpoint_variant_conflict(self, config, data_dir, tmp_path):
        out = tmp_path / "run"
        assert _train(config, data_dir, out, "--iterations", "1") == 0
        code = main(
            ["eval", "--config", str(config), "--dataset", str(data_dir), "--out", str(out), "--variant", "baseline"]
        )
        assert code == 2


@pytest.mark.slow
def test_verify(tmp_path):
    assert main(["verify", "--out", str(tmp_path / "verify")]) == 0
    report = json.loads((tmp_path / "verify" / "verification.json").read_text())
    assert all(check["passed"] for check in report["checks"])
