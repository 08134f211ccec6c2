"""
Workflow definitions for the CLI commands.

Each command is a WorkflowDefinition run by the orchestrator, so every
invocation lands in the run ledger. Ablation cells and verification
checks are separate steps that continue on failure.
"""
from pathlib import Path

from core.application.dtos import AblationReport, CheckResult, MetricReport, VerificationReport
from core.application.services import (
    AblationService,
    DatasetService,
    EvaluationService,
    TrainingService,
    VerificationService,
    compare_reports,
    latest_checkpoint_path,
    render_table,
    restore_model,
    summary,
)
from core.data import (
    JsonlDatasetRepository,
    JsonlReportRepository,
    NpzCheckpointRepository,
)
from core.domain.enums import SplitName
from core.domain.exceptions import CheckpointError, ConfigError, VerificationError
from core.domain.value_objects import PolicyVariant
from core.env import NavDataset
from core.infrastructure.logging import get_logger
from core.settings import AppSettings
from orchestration import ExecutionContext, RetryPolicy, WorkflowDefinition, WorkflowResult, WorkflowStep

logger = get_logger("cli.workflows")

SERVICE = "soat-cli"

# Transient filesystem errors on dataset, report and config I/O; domain errors are never retried.
IO_RETRY = RetryPolicy(max_attempts=3, backoff_seconds=0.5, retry_on=(OSError,))


def load_dataset(settings: AppSettings) -> NavDataset:
    return DatasetService(JsonlDatasetRepository(Path(settings.run.dataset))).load(expected_env=settings.env)


def gen_env_workflow(settings: AppSettings) -> WorkflowDefinition:
    root = Path(settings.run.dataset)
    service = DatasetService(JsonlDatasetRepository(root))

    async def generate(ctx: ExecutionContext, _input: object | None) -> NavDataset:
        return service.build(settings.env, settings.run.seed, settings.model.max_instruction_len, force=settings.run.force)

    async def save(ctx: ExecutionContext, dataset: object | None) -> dict[str, int]:
        service.save(dataset, force=settings.run.force)
        return summary(service.load())

    async def echo(ctx: ExecutionContext, counts: object | None) -> dict[str, int]:
        settings.write_echo(root / "resolved_config.env")
        return counts

    return WorkflowDefinition(
        name="gen-env",
        service=SERVICE,
        operation="gen-env",
        steps=[
            WorkflowStep("generate_dataset", generate),
            WorkflowStep("save_dataset", save, IO_RETRY),
            WorkflowStep("write_config", echo, IO_RETRY),
        ],
    )


def train_workflow(settings: AppSettings) -> WorkflowDefinition:
    out = Path(settings.run.out)

    async def load(ctx: ExecutionContext, _input: object | None) -> NavDataset:
        return load_dataset(settings)

    async def train(ctx: ExecutionContext, dataset: object | None) -> dict[str, str]:
        checkpoints = NpzCheckpointRepository()
        resume_from = None
        if settings.run.resume:
            resume_from = Path(settings.run.checkpoint) if settings.run.checkpoint else latest_checkpoint_path(out)
            if not resume_from.is_file():
                raise CheckpointError(f"Nothing to resume from: {resume_from} does not exist")
        service = TrainingService(dataset, settings, settings.run.policy_variant, checkpoints, out)
        result = service.train(resume_from=resume_from, workers=settings.run.workers)
        return {
            "checkpoint": str(result.final_checkpoint),
            "iterations": str(result.iterations),
            "log": str(service.log.log_path),
        }

    return WorkflowDefinition(
        name="train",
        service=SERVICE,
        operation="train",
        steps=[WorkflowStep("load_dataset", load, IO_RETRY), WorkflowStep("train_loop", train)],
    )


def _eval_variant(settings: AppSettings, checkpoint_variant: str) -> PolicyVariant:
    if not checkpoint_variant:
        return settings.run.policy_variant
    variant = PolicyVariant.parse(checkpoint_variant)
    if settings.run.variant and settings.run.variant != variant.name:
        raise ConfigError(f"Checkpoint holds variant {variant.name}, but --variant {settings.run.variant} was given")
    return variant


def eval_workflow(settings: AppSettings) -> WorkflowDefinition:
    out = Path(settings.run.out)
    split = SplitName(settings.eval.split)

    async def load(ctx: ExecutionContext, _input: object | None) -> NavDataset:
        return load_dataset(settings)

    async def evaluate(ctx: ExecutionContext, dataset: object | None) -> MetricReport:
        model, variant, label = None, settings.run.policy_variant, None
        if settings.eval.policy == "model":
            path = Path(settings.run.checkpoint) if settings.run.checkpoint else latest_checkpoint_path(out)
            ckpt = NpzCheckpointRepository().load(path)
            model, variant, label = restore_model(ckpt), _eval_variant(settings, ckpt.variant), str(path)
        evaluator = EvaluationService(
            dataset,
            max_steps=settings.train.max_episode_steps,
            object_heavy_threshold=settings.eval.object_heavy_threshold,
            workers=settings.run.workers,
        )
        return evaluator.evaluate(
            split,
            variant,
            model=model,
            policy=settings.eval.policy,
            seed=settings.run.seed,
            checkpoint=label,
            max_episodes=settings.eval.max_eval_episodes,
        )

    async def write(ctx: ExecutionContext, report: object | None) -> dict[str, str]:
        reports = JsonlReportRepository()
        path = Path(settings.run.report) if settings.run.report else out / f"report_{split.value}.jsonl"
        reports.save(path, report)
        written = {"report": str(path)}
        if settings.run.baseline_report:
            comparison = compare_reports(reports.load(Path(settings.run.baseline_report)), report)
            cmp_path = path.with_name(path.stem + "_comparison.json")
            cmp_path.write_text(comparison.model_dump_json(indent=2) + "\n", encoding="utf-8")
            written["comparison"] = str(cmp_path)
        return written

    return WorkflowDefinition(
        name="eval",
        service=SERVICE,
        operation="eval",
        steps=[
            WorkflowStep("load_dataset", load, IO_RETRY),
            WorkflowStep("evaluate", evaluate),
            WorkflowStep("write_report", write, IO_RETRY),
        ],
    )


def ablate_workflow(settings: AppSettings, dataset: NavDataset) -> tuple[WorkflowDefinition, AblationService]:
    service = AblationService(
        dataset,
        settings,
        NpzCheckpointRepository(),
        JsonlReportRepository(),
        Path(settings.run.out),
        workers=settings.run.workers,
    )

    def cell_activity(cell):
        async def run(ctx: ExecutionContext, _input: object | None):
            return service.run_cell(cell)

        return run

    steps = [WorkflowStep(cell.name, cell_activity(cell), continue_on_failure=True) for cell in service.cells()]
    return WorkflowDefinition(name="ablate", service=SERVICE, operation="ablate", steps=steps), service


def finish_ablation(result: WorkflowResult, service: AblationService, out: Path) -> AblationReport:
    cells = {cell.name: cell for cell in service.cells()}
    results = [
        step.output if step.success else service.failed_cell(cells[step.name], step.error or "failed")
        for step in result.steps
    ]
    report = service.assemble(results)
    out.mkdir(parents=True, exist_ok=True)
    (out / "ablation.json").write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
    (out / "ablation.tsv").write_text(render_table(report), encoding="utf-8")
    return report


def verify_workflow(settings: AppSettings) -> WorkflowDefinition:
    service = VerificationService(seed=settings.run.seed)

    def check_activity(name, check):
        async def run(ctx: ExecutionContext, _input: object | None) -> CheckResult:
            try:
                result = check()
            except Exception as exc:
                raise VerificationError(f"{name}: {type(exc).__name__}: {exc}") from exc
            if not result.passed:
                raise VerificationError(f"{name}: {result.detail}")
            return result

        return run

    steps = [
        WorkflowStep(name, check_activity(name, check), continue_on_failure=True) for name, check in service.checks()
    ]
    return WorkflowDefinition(name="verify", service=SERVICE, operation="verify", steps=steps)


def finish_verification(result: WorkflowResult, out: Path) -> VerificationReport:
    checks = [
        step.output if step.success else CheckResult(name=step.name, passed=False, detail=step.error or "failed")
        for step in result.steps
    ]
    report = VerificationReport(checks=checks)
    out.mkdir(parents=True, exist_ok=True)
    (out / "verification.json").write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return report
