"""Rendering of comparison artifacts from metric reports.

Three formats, all pure functions of :class:`MetricsReport` inputs and
therefore byte-deterministic:

  markdown   the per-category comparison table and the top-n table
  csv        category x tool x kind counts flattened for spreadsheets
  json       machine-readable results document (schema_version 1)

The renderer performs no arithmetic beyond the documented floor
percentage; every number is traceable to a report field.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from .analyzer import MetricsReport, format_percentage
from .errors import ReportError

SCHEMA_VERSION = 1
_KIND_CODES = ("FR", "FP", "LV")


@dataclass(frozen=True)
class ReportDocument:
    """A rendered artifact: format tag plus exact bytes."""

    format: str
    body: bytes

    def write_to(self, directory: str | Path) -> Path:
        path = Path(directory) / f"report.{self.format}"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(self.body)
        return path


def order_reports(reports: Sequence[MetricsReport]) -> list[MetricsReport]:
    """Tools ordered by performance: descending exact matches, then name."""
    return sorted(reports, key=lambda r: (-r.exact_total, r.tool))


def _check_consistent(reports: Sequence[MetricsReport]) -> None:
    if not reports:
        raise ReportError("at least one metrics report is required")
    category_sets = {frozenset(r.exact_by_category) for r in reports}
    if len(category_sets) > 1:
        raise ReportError("metrics reports cover different category sets")


def render_category_table(reports: Sequence[MetricsReport]) -> ReportDocument:
    """Markdown table: categories x (tool x FR/FP/LV), with totals footer."""
    _check_consistent(reports)
    ordered = order_reports(reports)
    categories = sorted(ordered[0].exact_by_category)

    lines = [
        "# Exact matches by category",
        "",
        "FR: function return type, FP: function parameter type, "
        "LV: local variable type.",
        "",
    ]
    header = ["Category"]
    for report in ordered:
        header.extend(f"{report.tool} {code}" for code in _KIND_CODES)
    lines.append("| " + " | ".join(header) + " |")
    lines.append("|:---" + "|---:" * (len(header) - 1) + "|")

    for category in categories:
        row = [category]
        for report in ordered:
            counts = report.exact_by_category[category]
            row.extend(str(counts[code]) for code in _KIND_CODES)
        lines.append("| " + " | ".join(row) + " |")

    total_row = ["**Total**"]
    for report in ordered:
        total_row.extend(f"**{report.exact_by_kind[code]}**" for code in _KIND_CODES)
    lines.append("| " + " | ".join(total_row) + " |")

    def summary_row(label: str, value: Callable[[MetricsReport], tuple[int, int]]) -> str:
        cells = [f"**{label}**"]
        for report in ordered:
            numer, denom = value(report)
            pct = f"{format_percentage(numer, denom)}%" if denom > 0 else "n/a"
            cells.append(f"**{numer}/{denom} ({pct})**")
            cells.extend([""] * (len(_KIND_CODES) - 1))
        return "| " + " | ".join(cells) + " |"

    lines.append(summary_row("Exact", lambda r: (r.exact_total, r.gt_total)))
    lines.append(summary_row("Sound", lambda r: (r.sound_count, r.snippet_count)))
    lines.append(summary_row("Complete", lambda r: (r.complete_count, r.snippet_count)))
    body = "\n".join(lines) + "\n"
    return ReportDocument(format="md", body=body.encode("utf-8"))


def render_top_n_table(
    reports: Sequence[MetricsReport], ns: Sequence[int] = (1, 3, 5)
) -> ReportDocument:
    """Markdown table of top-n matches; unranked tools get a single n=1 row."""
    _check_consistent(reports)
    ordered = order_reports(reports)
    ns = sorted(set(ns))

    lines = [
        "# Top-n matches",
        "",
        "| Tool | top-n | FR | FP | LV | Total |",
        "|:---|---:|---:|---:|---:|---:|",
    ]
    for report in ordered:
        rows = ns if report.ranked else [1]
        for n in rows:
            if n not in report.top_n:
                raise ReportError(
                    f"report for {report.tool} has no top-{n} counts "
                    f"(computed: {sorted(report.top_n)})"
                )
            counts = report.top_n[n]
            lines.append(
                "| "
                + " | ".join(
                    [
                        report.tool,
                        str(n),
                        str(counts["FR"]),
                        str(counts["FP"]),
                        str(counts["LV"]),
                        str(counts["total"]),
                    ]
                )
                + " |"
            )
    body = "\n".join(lines) + "\n"
    return ReportDocument(format="md", body=body.encode("utf-8"))


def render_csv(reports: Sequence[MetricsReport]) -> ReportDocument:
    """Flat ``tool,category,kind,value`` rows for spreadsheet use."""
    _check_consistent(reports)
    ordered = order_reports(reports)
    buf = io.StringIO()
    buf.write("tool,category,kind,value\r\n")
    for report in ordered:
        for category in sorted(report.exact_by_category):
            for code in _KIND_CODES:
                buf.write(
                    f"{report.tool},{category},{code},"
                    f"{report.exact_by_category[category][code]}\r\n"
                )
        for code in _KIND_CODES:
            buf.write(f"{report.tool},total,{code},{report.exact_by_kind[code]}\r\n")
        buf.write(f"{report.tool},total,exact,{report.exact_total}\r\n")
        buf.write(f"{report.tool},total,annotations,{report.gt_total}\r\n")
        precision = "" if report.precision is None else repr(report.precision)
        recall = "" if report.recall is None else repr(report.recall)
        buf.write(f"{report.tool},summary,precision,{precision}\r\n")
        buf.write(f"{report.tool},summary,recall,{recall}\r\n")
        buf.write(f"{report.tool},summary,sound,{report.sound_count}\r\n")
        buf.write(f"{report.tool},summary,complete,{report.complete_count}\r\n")
        buf.write(f"{report.tool},summary,snippets,{report.snippet_count}\r\n")
    return ReportDocument(format="csv", body=buf.getvalue().encode("utf-8"))


def emit_results_json(reports: Sequence[MetricsReport]) -> ReportDocument:
    """Machine-readable results document with stable key ordering."""
    payload = {
        "schema_version": SCHEMA_VERSION,
        "tools": [report.to_dict() for report in order_reports(reports)],
    }
    body = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return ReportDocument(format="json", body=body.encode("utf-8"))


def parse_results_json(body: bytes) -> list[MetricsReport]:
    """Inverse of :func:`emit_results_json`."""
    data = json.loads(body.decode("utf-8"))
    if not isinstance(data, dict) or data.get("schema_version") != SCHEMA_VERSION:
        raise ReportError("unsupported results document (bad schema_version)")
    return [MetricsReport.from_dict(obj) for obj in data.get("tools", [])]


def write_report_files(
    reports: Sequence[MetricsReport],
    out_dir: str | Path,
    formats: Sequence[str] = ("md", "csv", "json"),
    ns: Sequence[int] = (1, 3, 5),
) -> dict[str, Path]:
    """Write ``report.{md,csv,json}`` under ``out_dir`` for the chosen formats."""
    out = Path(out_dir)
    written: dict[str, Path] = {}
    for fmt in formats:
        if fmt == "md":
            table = render_category_table(reports).body
            top = render_top_n_table(reports, ns).body
            doc = ReportDocument(format="md", body=table + b"\n" + top)
        elif fmt == "csv":
            doc = render_csv(reports)
        elif fmt == "json":
            doc = emit_results_json(reports)
        else:
            raise ReportError(f"unknown report format {fmt!r}")
        written[fmt] = doc.write_to(out)
    return written
