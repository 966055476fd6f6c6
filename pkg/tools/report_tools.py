"""Report emission and inspection for cost, RMR and sweep tables."""

from __future__ import annotations

import io
import json
from pathlib import Path
from typing import Any, Dict, Mapping

import numpy as np
import pandas as pd

REPORT_FORMATS = ("csv", "json")


def render_report(frame: pd.DataFrame, fmt: str = "csv", provenance: Mapping[str, Any] | None = None) -> str:
    """Deterministic text for a report; CSV gets `# key=value` provenance lines before the header"""
    if fmt not in REPORT_FORMATS:
        raise ValueError(f"unknown report format {fmt!r}")
    provenance = dict(sorted((provenance or {}).items()))
    if fmt == "json":
        rows = json.loads(frame.to_json(orient="records"))
        document = {"provenance": provenance, "columns": list(frame.columns), "rows": rows}
        return json.dumps(document, indent=2, ensure_ascii=False) + "\n"

    buffer = io.StringIO()
    for key, value in provenance.items():
        buffer.write(f"# {key}={value}\n")
    frame.to_csv(buffer, index=False, lineterminator="\n")
    return buffer.getvalue()


def emit_report(
    frame: pd.DataFrame,
    fmt: str = "csv",
    path: str | Path | None = None,
    provenance: Mapping[str, Any] | None = None,
) -> str:
    """Render the report and write it to `path` when given; an empty frame still gets its header"""
    text = render_report(frame, fmt, provenance)
    if path is not None:
        target = Path(path)
        if target.parent and not target.parent.exists():
            raise FileNotFoundError(f"cannot write report: {target.parent} does not exist")
        target.write_text(text, encoding="utf-8")
    return text


class ReportAnalyzer:
    def __init__(self, report_path: str | Path):
        self.report_path = str(report_path)
        self.df = None
        self.load_report()

    def load_report(self):
        """Load a CSV report, skipping provenance lines"""
        try:
            self.df = pd.read_csv(self.report_path, comment="#")
        except Exception as e:
            raise ValueError(f"Error loading report: {e}") from e

    def get_info(self) -> Dict[str, Any]:
        if self.df is None:
            return {"error": "No report loaded"}
        return {
            "shape": list(self.df.shape),
            "columns": list(self.df.columns),
            "sample_data": self.df.head(3).to_dict("records"),
        }

    def get_summary_stats(self) -> Dict[str, Any]:
        """Summary statistics for the numeric columns"""
        if self.df is None:
            return {"error": "No report loaded"}
        numeric_cols = self.df.select_dtypes(include=[np.number]).columns
        if len(numeric_cols) == 0:
            return {"message": "No numeric columns found"}
        return self.df[numeric_cols].describe().to_dict()

    def failing_rows(self, column: str = "pass") -> Dict[str, Any]:
        try:
            if column not in self.df.columns:
                return {"error": f"Column '{column}' not found"}
            failed = self.df[~self.df[column].astype(bool)]
            return {"column": column, "failed_count": len(failed), "data": failed.to_dict("records")}
        except Exception as e:
            return {"error": f"Filter error: {e}"}
