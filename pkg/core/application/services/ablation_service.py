"""
Ablation grid over the three proposed modules plus the pretraining switch.

Combinations without meaning (view aggregation with no object tokens to
aggregate) are not cells. Each cell trains and evaluates once per seed;
the CLI runs cells as orchestrator steps so one failing cell does not stop
the grid.
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from core.application.dtos import (
    METRIC_NAMES,
    AblationCellResult,
    AblationReport,
    MeanStderr,
    MetricReport,
    OrderingCheck,
)
from core.application.interfaces import ICheckpointRepository, IReportRepository
from core.domain.enums import MaskPattern, SplitName
from core.domain.value_objects import PolicyVariant
from core.env import NavDataset
from core.infrastructure.logging import get_logger
from core.settings import AppSettings

from .evaluation_service import EvaluationService
from .training_service import TrainingService, restore_model

logger = get_logger(__name__)


@dataclass(frozen=True)
class AblationCell:
    name: str
    variant: PolicyVariant
    pretrain: bool = True


BASELINE_CELL = "baseline"
FULL_CELL = "full"
OBJECTS_ONLY_CELL = "all+obj"
NO_PRETRAIN_CELL = "full-no-pretrain"

ABLATION_CELLS: tuple[AblationCell, ...] = (
    AblationCell(BASELINE_CELL, PolicyVariant(MaskPattern.BASELINE, object_features=False, view_aggregation=False)),
    AblationCell(OBJECTS_ONLY_CELL, PolicyVariant(MaskPattern.ALL_ATTENTION, object_features=True, view_aggregation=False)),
    AblationCell("all+obj+agg", PolicyVariant(MaskPattern.ALL_ATTENTION, object_features=True, view_aggregation=True)),
    AblationCell(
        "selective", PolicyVariant(MaskPattern.SELECTIVE_OBJECT, object_features=False, view_aggregation=False)
    ),
    AblationCell(
        "selective+obj", PolicyVariant(MaskPattern.SELECTIVE_OBJECT, object_features=True, view_aggregation=False)
    ),
    AblationCell(FULL_CELL, PolicyVariant(MaskPattern.SELECTIVE_OBJECT, object_features=True, view_aggregation=True)),
    AblationCell(
        NO_PRETRAIN_CELL,
        PolicyVariant(MaskPattern.SELECTIVE_OBJECT, object_features=True, view_aggregation=True),
        pretrain=False,
    ),
)

# (name, left cell, right cell): left is expected to score at least as high as right.
ORDERINGS = (
    ("full_vs_object_features", FULL_CELL, OBJECTS_ONLY_CELL),
    ("pretrain_vs_no_pretrain", FULL_CELL, NO_PRETRAIN_CELL),
)
ORDERING_METRIC = "success_rate"


def mean_stderr(values: Sequence[float]) -> MeanStderr:
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        return MeanStderr(mean=float("nan"), stderr=float("nan"), n=0)
    stderr = float(arr.std(ddof=1) / np.sqrt(arr.size)) if arr.size > 1 else 0.0
    return MeanStderr(mean=float(arr.mean()), stderr=stderr, n=int(arr.size))


class AblationService:
    def __init__(
        self,
        dataset: NavDataset,
        settings: AppSettings,
        checkpoints: ICheckpointRepository,
        reports: IReportRepository,
        out_dir: Path,
        workers: int = 1,
    ) -> None:
        self._dataset = dataset
        self._settings = settings
        self._checkpoints = checkpoints
        self._reports = reports
        self._out = Path(out_dir)
        self._workers = workers

    @property
    def seeds(self) -> list[int]:
        base = self._settings.run.seed
        return [base + k for k in range(self._settings.run.seeds)]

    @property
    def split(self) -> SplitName:
        return SplitName(self._settings.eval.split)

    def cells(self) -> tuple[AblationCell, ...]:
        return ABLATION_CELLS

    def _run_seed(self, cell: AblationCell, seed: int) -> MetricReport:
        cell_dir = self._out / "cells" / cell.name / f"seed_{seed}"
        settings = self._settings.replace(
            seed=seed, pretrain=cell.pretrain, pattern=cell.variant.pattern.value, variant=cell.variant.name
        )
        settings.write_echo(cell_dir / "resolved_config.env")
        trainer = TrainingService(self._dataset, settings, cell.variant, self._checkpoints, cell_dir)
        result = trainer.train(workers=self._workers)
        model_ckpt = self._checkpoints.load(result.final_checkpoint)

        evaluator = EvaluationService(
            self._dataset,
            max_steps=settings.train.max_episode_steps,
            object_heavy_threshold=settings.eval.object_heavy_threshold,
            workers=self._workers,
        )
        report = evaluator.evaluate(
            self.split,
            cell.variant,
            model=restore_model(model_ckpt),
            seed=seed,
            checkpoint=str(result.final_checkpoint),
            max_episodes=settings.eval.max_eval_episodes,
        )
        self._reports.save(cell_dir / f"report_{self.split.value}.jsonl", report)
        return report

    def run_cell(self, cell: AblationCell) -> AblationCellResult:
        """Train and evaluate one cell for every seed; metrics are mean and stderr over seeds."""
        reports = [self._run_seed(cell, seed) for seed in self.seeds]
        metrics = {
            name: mean_stderr([r.aggregate.metric(name) for r in reports]) for name in METRIC_NAMES
        }
        logger.info(
            "ablation_cell_finished: cell=%s, seeds=%d, sr=%.4f, spl=%.4f",
            cell.name,
            len(reports),
            metrics["success_rate"].mean,
            metrics["spl"].mean,
        )
        return AblationCellResult(
            name=cell.name,
            variant=cell.variant.name,
            pretrain=cell.pretrain,
            status="success",
            seeds=self.seeds,
            metrics=metrics,
        )

    def failed_cell(self, cell: AblationCell, error: str) -> AblationCellResult:
        logger.warning("ablation_cell_failed: cell=%s, error=%s", cell.name, error)
        return AblationCellResult(
            name=cell.name,
            variant=cell.variant.name,
            pretrain=cell.pretrain,
            status="failed",
            seeds=self.seeds,
            error=error,
        )

    def assemble(self, results: Sequence[AblationCellResult]) -> AblationReport:
        """Attach deltas against the baseline cell and evaluate the expected orderings."""
        by_name = {r.name: r for r in results}
        baseline = by_name.get(BASELINE_CELL)
        cells = []
        for result in results:
            if result.status == "success" and baseline is not None and baseline.status == "success":
                deltas = {
                    name: result.metrics[name].mean - baseline.metrics[name].mean for name in METRIC_NAMES
                }
                result = result.model_copy(update={"deltas_vs_baseline": deltas})
            cells.append(result)

        orderings = []
        for name, left, right in ORDERINGS:
            lhs, rhs = by_name.get(left), by_name.get(right)
            lv = lhs.metrics[ORDERING_METRIC].mean if lhs is not None and lhs.status == "success" else None
            rv = rhs.metrics[ORDERING_METRIC].mean if rhs is not None and rhs.status == "success" else None
            holds = None if lv is None or rv is None else bool(lv >= rv)
            if holds is False:
                logger.warning("ablation_ordering_failed: check=%s, left=%.4f, right=%.4f", name, lv, rv)
            orderings.append(
                OrderingCheck(
                    name=name,
                    left=left,
                    right=right,
                    metric=ORDERING_METRIC,
                    left_value=lv,
                    right_value=rv,
                    holds=holds,
                )
            )
        return AblationReport(split=self.split.value, seeds=self.seeds, cells=cells, orderings=orderings)


def render_table(report: AblationReport) -> str:
    """Plain-text grid: one row per cell, mean±stderr per metric, SR delta vs baseline."""
    header = ["cell", "pretrain", "status"] + list(METRIC_NAMES) + ["d_sr"]
    lines = ["\t".join(header)]
    for cell in report.cells:
        row = [cell.name, "yes" if cell.pretrain else "no", cell.status]
        for name in METRIC_NAMES:
            m = cell.metrics.get(name)
            row.append(f"{m.mean:.4f}±{m.stderr:.4f}" if m is not None else "-")
        delta = cell.deltas_vs_baseline.get("success_rate")
        row.append(f"{delta:+.4f}" if delta is not None else "-")
        lines.append("\t".join(row))
    for check in report.orderings:
        status = {True: "holds", False: "FAILED", None: "n/a"}[check.holds]
        lines.append(f"# {check.name}: {check.left} >= {check.right} on {check.metric}: {status}")
    return "\n".join(lines) + "\n"
