"""JSONL implementation of IReportRepository: header, rows sorted by episode id, aggregate footer."""

from pathlib import Path

from pydantic import ValidationError

from core.application.dtos import REPORT_FORMAT_VERSION, MetricReport
from core.application.interfaces import IReportRepository
from core.domain.exceptions import DatasetFormatError

from ..records import ReportFooterRecord, ReportHeaderRecord, ReportRowRecord


class JsonlReportRepository(IReportRepository):
    def save(self, path: Path, report: MetricReport) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        header = ReportHeaderRecord(
            format_version=report.format_version,
            split=report.split,
            policy=report.policy,
            variant=report.variant,
            seed=report.seed,
            checkpoint=report.checkpoint,
            object_heavy_threshold=report.object_heavy_threshold,
        )
        lines = [header.model_dump_json()]
        lines.extend(
            ReportRowRecord(row=row).model_dump_json()
            for row in sorted(report.rows, key=lambda r: r.episode_id)
        )
        lines.append(ReportFooterRecord(aggregate=report.aggregate, strata=report.strata).model_dump_json())
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    def load(self, path: Path) -> MetricReport:
        """
        Raises:
            DatasetFormatError: if the file is missing, malformed or has an unknown version
        """
        path = Path(path)
        if not path.is_file():
            raise DatasetFormatError(f"Report not found: {path}")
        lines = [line for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]
        if len(lines) < 2:
            raise DatasetFormatError(f"Report {path} needs a header and an aggregate footer")
        try:
            header = ReportHeaderRecord.model_validate_json(lines[0])
            rows = [ReportRowRecord.model_validate_json(line).row for line in lines[1:-1]]
            footer = ReportFooterRecord.model_validate_json(lines[-1])
        except ValidationError as exc:
            raise DatasetFormatError(f"Malformed report {path}: {exc}") from exc
        if header.format_version != REPORT_FORMAT_VERSION:
            raise DatasetFormatError(f"Unsupported report version {header.format_version} in {path}")
        return MetricReport(
            format_version=header.format_version,
            split=header.split,
            policy=header.policy,
            variant=header.variant,
            seed=header.seed,
            checkpoint=header.checkpoint,
            object_heavy_threshold=header.object_heavy_threshold,
            rows=rows,
            aggregate=footer.aggregate,
            strata=footer.strata,
        )
