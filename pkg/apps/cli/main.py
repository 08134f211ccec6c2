"""
soat command-line interface.

    python -m apps.cli.main gen-env  --config toy.env --out data/toy
    python -m apps.cli.main train    --config toy.env --dataset data/toy --out runs/full
    python -m apps.cli.main eval     --dataset data/toy --out runs/full --split val_unseen
    python -m apps.cli.main ablate   --config toy.env --dataset data/toy --seeds 3 --out runs/ablate
    python -m apps.cli.main verify   --out runs/verify

Exit codes: 0 success, 2 config error, 3 data error, 4 numeric error,
5 verification failure, 1 anything else.
"""
import argparse
import asyncio
import sys
from pathlib import Path
from typing import Any, Sequence

from core.application.services import render_table
from core.data import JsonlRunLedger
from core.domain.enums import MaskPattern
from core.domain.exceptions import SoatError
from core.infrastructure.logging import configure_logging, get_logger
from core.settings import AppSettings
from orchestration import InMemoryEventBus, WorkflowDefinition, WorkflowResult, create_default_orchestrator

from . import workflows
from .progress import StepProgress

logger = get_logger("cli")


def _shared(parser: argparse.ArgumentParser, out_dest: str = "out") -> None:
    parser.add_argument("--config", dest="config_file", type=Path, help="flat KEY=VALUE config file")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--pattern", choices=[p.value for p in MaskPattern])
    parser.add_argument("--variant", help="explicit variant, e.g. all+obj+noagg")
    parser.add_argument("--workers", type=int)
    parser.add_argument("--out", dest=out_dest, help="output directory")
    parser.add_argument("--verbosity", choices=["debug", "info", "warning", "error"])


def _dataset(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--dataset", help="dataset directory written by gen-env")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="soat", description=__doc__.split("\n\n")[0].strip())
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-env", help="generate worlds, splits and the manifest", argument_default=argparse.SUPPRESS)
    _shared(gen, out_dest="dataset")
    gen.add_argument("--force", action="store_true", help="overwrite an existing dataset")

    train = sub.add_parser("train", help="train a policy variant", argument_default=argparse.SUPPRESS)
    _shared(train)
    _dataset(train)
    train.add_argument("--lr", dest="learning_rate", type=float)
    train.add_argument("--iterations", type=int)
    train.add_argument("--batch-size", dest="batch_size", type=int)
    train.add_argument("--bc-fraction", dest="bc_fraction", type=float)
    train.add_argument("--pretrain", action=argparse.BooleanOptionalAction)
    train.add_argument("--eval-every", dest="eval_every", type=int)
    train.add_argument("--checkpoint-every", dest="checkpoint_every", type=int)
    train.add_argument("--resume", action="store_true", help="continue from --checkpoint or the latest checkpoint")
    train.add_argument("--checkpoint", help="checkpoint to resume from")

    ev = sub.add_parser("eval", help="evaluate a checkpoint or a reference policy", argument_default=argparse.SUPPRESS)
    _shared(ev)
    _dataset(ev)
    ev.add_argument("--checkpoint")
    ev.add_argument("--split", choices=["train", "val_seen", "val_unseen"])
    ev.add_argument("--policy", choices=["model", "teacher", "random"])
    ev.add_argument("--report", help="report path (default <out>/report_<split>.jsonl)")
    ev.add_argument("--baseline-report", dest="baseline_report", help="report to compare against")
    ev.add_argument("--max-episodes", dest="max_eval_episodes", type=int)

    ab = sub.add_parser("ablate", help="train and evaluate the ablation grid", argument_default=argparse.SUPPRESS)
    _shared(ab)
    _dataset(ab)
    ab.add_argument("--seeds", type=int, help="seeds per cell (seed, seed+1, ...)")
    ab.add_argument("--split", choices=["train", "val_seen", "val_unseen"])
    ab.add_argument("--iterations", type=int)

    ver = sub.add_parser("verify", help="run the verification suite", argument_default=argparse.SUPPRESS)
    _shared(ver)
    return parser


def resolve_settings(args: argparse.Namespace) -> AppSettings:
    overrides: dict[str, Any] = {k: v for k, v in vars(args).items() if k not in ("command", "config_file")}
    return AppSettings.from_sources(getattr(args, "config_file", None), overrides)


def _output_dir(command: str, settings: AppSettings) -> Path:
    return Path(settings.run.dataset if command == "gen-env" else settings.run.out)


def _ledger(command: str, out: Path) -> JsonlRunLedger:
    # gen-env output must stay byte-identical across reruns
    return JsonlRunLedger.beside(out) if command == "gen-env" else JsonlRunLedger(out)


async def _run(workflow: WorkflowDefinition, command: str, settings: AppSettings) -> WorkflowResult:
    out = _output_dir(command, settings)
    bus = InMemoryEventBus()
    StepProgress(command).attach(bus)
    orchestrator = create_default_orchestrator(workflows.SERVICE, command, _ledger(command, out), event_bus=bus)
    return await orchestrator.run(workflow, details={"seed": str(settings.run.seed), "out": str(out)})


def _report(result: WorkflowResult) -> None:
    for step in result.steps:
        status = "ok" if step.success else f"FAILED ({step.error})"
        print(f"{step.name}: {status}")
        if step.success and isinstance(step.output, dict):
            for key, value in step.output.items():
                print(f"  {key}: {value}")


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    command = args.command
    try:
        settings = resolve_settings(args)
    except SoatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    configure_logging(settings.run.verbosity)

    out = _output_dir(command, settings)
    if command != "gen-env":
        out.mkdir(parents=True, exist_ok=True)
        settings.write_echo(out / "resolved_config.env")

    try:
        if command == "gen-env":
            result = asyncio.run(_run(workflows.gen_env_workflow(settings), command, settings))
        elif command == "train":
            result = asyncio.run(_run(workflows.train_workflow(settings), command, settings))
        elif command == "eval":
            result = asyncio.run(_run(workflows.eval_workflow(settings), command, settings))
        elif command == "ablate":
            dataset = workflows.load_dataset(settings)
            workflow, service = workflows.ablate_workflow(settings, dataset)
            result = asyncio.run(_run(workflow, command, settings))
            report = workflows.finish_ablation(result, service, out)
            print(render_table(report), end="")
        else:
            result = asyncio.run(_run(workflows.verify_workflow(settings), command, settings))
            report = workflows.finish_verification(result, out)
            print(f"verification: {'passed' if report.passed else 'FAILED'}")
    except SoatError as exc:
        logger.error("command_failed: command=%s, error=%s", command, exc)
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code

    _report(result)
    logger.info("command_finished: command=%s, status=%s, exit_code=%d", command, result.status.value, result.exit_code)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
