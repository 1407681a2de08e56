"""Report assembly and rendering (text via Jinja2, structured via pydantic JSON)."""
from __future__ import annotations

import logging
from typing import Union

import pandas as pd
from jinja2 import Environment, PackageLoader

from .brauer import DivisionVerdict
from .models import OutputFormat, Report, ReportBundle, VerdictRecord

logger = logging.getLogger(__name__)

templates = Environment(
    loader=PackageLoader("brauerlab", "templates"),
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
)


def verdict_record(subject: str, verdict: DivisionVerdict) -> VerdictRecord:
    return VerdictRecord(
        subject=subject,
        status=verdict.status.value,
        reason=verdict.reason,
        witness=verdict.witness,
        trace=list(verdict.trace),
    )


def bundle_table(bundle: ReportBundle) -> pd.DataFrame:
    """One row per acceptance item, ordered by item name."""
    rows = [
        {"item": item.name, "status": item.status, "detail": item.detail, "duration_s": round(item.duration_s, 3)}
        for item in bundle.items
    ]
    return pd.DataFrame(rows, columns=["item", "status", "detail", "duration_s"])


def write_csv(bundle: ReportBundle, path: str) -> None:
    bundle_table(bundle).to_csv(path, index=False)
    logger.info("Wrote %d acceptance rows to %s", len(bundle.items), path)


def render_text(report: Union[Report, ReportBundle]) -> str:
    template = templates.get_template("report.txt.j2")
    if isinstance(report, ReportBundle):
        failed = [item for item in report.items if item.status == "fail"]
        table = bundle_table(report).to_string(index=False)
        return template.render(bundle=report, table=table, failed=failed, report=None)
    return template.render(report=report, bundle=None, table=None, failed=[])


def render_structured(report: Union[Report, ReportBundle]) -> str:
    return report.model_dump_json(indent=2)


def render(report: Union[Report, ReportBundle], output_format: OutputFormat) -> str:
    if output_format == OutputFormat.STRUCTURED:
        return render_structured(report)
    return render_text(report)
