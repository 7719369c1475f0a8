"""
Result export utilities.

Writes CLI results as JSON, CSV or a plain-text table, either to a file
(parent directories created on demand) or to stdout.
"""

import csv
import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, TextIO

from seesaw.config.settings import settings
from seesaw.utils.report_generator import ReportGenerator

logger = logging.getLogger(__name__)


def _json_safe(value: Any) -> Any:
    """Replace non-finite floats with strings so output stays valid JSON."""
    if isinstance(value, float) and not math.isfinite(value):
        if math.isnan(value):
            return "nan"
        return "inf" if value > 0 else "-inf"
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ";".join(_csv_cell(v) for v in value)
    return str(value)


class ResultExporter:
    """
    Export one CLI result in the requested format.

    A result is a title, the resolved parameters, a dictionary of scalar
    results and an optional list of rows (table/CSV body).
    """

    def __init__(self, output_format: Optional[str] = None, output_path: Optional[str] = None):
        """
        Initialize exporter.

        Args:
            output_format: "table", "json" or "csv" (uses settings if not provided)
            output_path: Destination file; stdout when None or "-"
        """
        self.output_format = output_format or settings.output_format
        self.output_path = None if output_path in (None, "-") else Path(output_path)
        self.report_generator = ReportGenerator()

    def export(
        self,
        title: str,
        parameters: Dict[str, Any],
        result: Optional[Dict[str, Any]] = None,
        rows: Optional[List[Dict[str, Any]]] = None,
        notes: Optional[Sequence[str]] = None,
    ) -> Optional[Path]:
        """
        Write the result.

        Returns:
            Path written, or None for stdout

        Raises:
            OSError: If the destination cannot be written
        """
        if self.output_path is None:
            self._write(sys.stdout, title, parameters, result, rows, notes)
            sys.stdout.flush()
            return None

        self.output_path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.output_path, "w", newline="", encoding="utf-8") as f:
            self._write(f, title, parameters, result, rows, notes)
        logger.info(f"Exported {self.output_format.upper()}: {self.output_path}")
        return self.output_path

    def _write(self, stream: TextIO, title, parameters, result, rows, notes):
        if self.output_format == "json":
            payload: Dict[str, Any] = dict(result or {})
            if rows is not None:
                payload["rows"] = rows
            if notes:
                payload.setdefault("notes", list(notes))
            payload["parameters"] = parameters
            json.dump(_json_safe(payload), stream, indent=2, default=str)
            stream.write("\n")
        elif self.output_format == "csv":
            self.write_csv(stream, rows if rows is not None else [result or {}])
        elif self.output_format == "table":
            stream.write(self.report_generator.generate_text_report(title, parameters, result, rows, notes))
        else:
            raise ValueError(f"unknown output format: {self.output_format}")

    @staticmethod
    def write_csv(stream: TextIO, rows: Sequence[Dict[str, Any]]):
        """Write homogeneous rows with a header taken from the first row."""
        if not rows:
            return
        fieldnames = list(rows[0].keys())
        writer = csv.DictWriter(stream, fieldnames=fieldnames, extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _csv_cell(row.get(k)) for k in fieldnames})
