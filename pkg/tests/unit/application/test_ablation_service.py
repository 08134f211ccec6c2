"""Tests for the ablation grid: cell list, aggregation and ordering checks."""

import pytest

from core.application.dtos import METRIC_NAMES, AblationCellResult, MeanStderr
from core.application.services import ABLATION_CELLS, AblationService, render_table
from core.application.services.ablation_service import mean_stderr
from core.data import JsonlReportRepository, NpzCheckpointRepository


@pytest.fixture
def service(dataset, tiny_settings, tmp_path):
    settings = tiny_settings.replace(iterations=1, seeds=2, max_eval_episodes=2)
    return AblationService(dataset, settings, NpzCheckpointRepository(), JsonlReportRepository(), tmp_path)


def _cell(name: str, sr: float, status: str = "success") -> AblationCellResult:
    metrics = {}
    if status == "success":
        metrics = {m: MeanStderr(mean=sr, stderr=0.0, n=2) for m in METRIC_NAMES}
    return AblationCellResult(name=name, variant=name, pretrain=True, status=status, seeds=[3, 4], metrics=metrics)


def test_mean_stderr():
    result = mean_stderr([0.2, 0.4, 0.6])
    assert result.mean == pytest.approx(0.4)
    assert result.stderr == pytest.approx(0.2 / 3**0.5)
    assert mean_stderr([0.5]).stderr == 0.0
    assert mean_stderr([]).n == 0


def test_cells_are_meaningful_variants():
    names = [cell.name for cell in ABLATION_CELLS]
    assert len(names) == len(set(names))
    assert all(not c.variant.view_aggregation or c.variant.object_features for c in ABLATION_CELLS)
    assert [c.pretrain for c in ABLATION_CELLS].count(False) == 1


class TestAssemble:
    def test_deltas_and_orderings(self, service):
        report = service.assemble(
            [_cell("baseline", 0.2), _cell("all+obj", 0.3), _cell("full", 0.5), _cell("full-no-pretrain", 0.6)]
        )
        full = next(c for c in report.cells if c.name == "full")
        assert full.deltas_vs_baseline["success_rate"] == pytest.approx(0.3)
        checks = {o.name: o.holds for o in report.orderings}
        assert checks == {"full_vs_object_features": True, "pretrain_vs_no_pretrain": False}
        assert report.seeds == [3, 4]

    def test_failed_cells_do_not_break_the_report(self, service):
        failed = service.failed_cell(ABLATION_CELLS[-1], "boom")
        report = service.assemble([_cell("baseline", 0.2), _cell("full", 0.4), failed])
        assert {o.name: o.holds for o in report.orderings}["pretrain_vs_no_pretrain"] is None
        table = render_table(report)
        assert "full-no-pretrain\tno\tfailed" in table
        assert "n/a" in table


def test_run_cell_trains_every_seed(service, tmp_path):
    result = service.run_cell(ABLATION_CELLS[0])
    assert result.status == "success"
    assert result.metrics["success_rate"].n == 2
    assert (tmp_path / "cells" / "baseline" / "seed_3" / "report_val_unseen.jsonl").is_file()
    assert (tmp_path / "cells" / "baseline" / "seed_4" / "resolved_config.env").is_file()
