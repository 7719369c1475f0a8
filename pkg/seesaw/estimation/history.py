"""
Historical experiment records: CSV ingestion and export.

Schema (UTF-8, header required):

    test_id,primary_dim,primary_effect,secondary_effect,adopted

primary_dim is "u" or "v"; secondary_effect and adopted may be left empty.
Malformed rows are reported with their line number and skipped; only a
missing header or required column aborts ingestion.
"""

import csv
import io
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, Optional, TextIO, Union

from seesaw.exceptions import IngestHeaderError

logger = logging.getLogger(__name__)

COLUMNS = ["test_id", "primary_dim", "primary_effect", "secondary_effect", "adopted"]
REQUIRED_COLUMNS = ["test_id", "primary_dim", "primary_effect"]
DIMENSIONS = ("u", "v")

_TRUE = {"true", "1", "yes", "y", "t"}
_FALSE = {"false", "0", "no", "n", "f"}


@dataclass(frozen=True)
class HistoricalRecord:
    """One past A/B test outcome."""

    test_id: str
    primary_dim: str
    primary_effect: float
    secondary_effect: Optional[float] = None
    adopted: Optional[bool] = None

    @property
    def other_dim(self) -> str:
        return "v" if self.primary_dim == "u" else "u"

    def effect_on(self, dimension: str) -> Optional[float]:
        """Effect measured on the given dimension, or None if untracked."""
        return self.primary_effect if dimension == self.primary_dim else self.secondary_effect


@dataclass(frozen=True)
class RowError:
    line: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line}: {self.message}"


@dataclass
class IngestReport:
    """Parsed records plus a line-numbered report of skipped rows."""

    records: List[HistoricalRecord] = field(default_factory=list)
    errors: List[RowError] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


def _parse_float(name: str, raw: str) -> float:
    try:
        value = float(raw)
    except (TypeError, ValueError):
        raise ValueError(f"{name} is not a number: {raw!r}")
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {raw!r}")
    return value


def _parse_bool(raw: str) -> Optional[bool]:
    text = raw.strip().lower()
    if not text:
        return None
    if text in _TRUE:
        return True
    if text in _FALSE:
        return False
    raise ValueError(f"adopted is not a boolean: {raw!r}")


def _parse_row(row: dict) -> HistoricalRecord:
    if None in row:
        raise ValueError("row has more fields than the header")
    test_id = (row.get("test_id") or "").strip()
    if not test_id:
        raise ValueError("test_id is empty")
    dim = (row.get("primary_dim") or "").strip().lower()
    if dim not in DIMENSIONS:
        raise ValueError(f"primary_dim must be one of {DIMENSIONS}, got {row.get('primary_dim')!r}")
    primary = _parse_float("primary_effect", (row.get("primary_effect") or "").strip())
    secondary_raw = (row.get("secondary_effect") or "").strip()
    secondary = _parse_float("secondary_effect", secondary_raw) if secondary_raw else None
    adopted = _parse_bool(row.get("adopted") or "")
    return HistoricalRecord(test_id, dim, primary, secondary, adopted)


def ingest(source: Union[str, Path, TextIO]) -> IngestReport:
    """
    Parse historical records from a CSV path or text stream.

    Args:
        source: File path or an open text stream

    Returns:
        IngestReport with parsed records and skipped-row errors

    Raises:
        IngestHeaderError: If the header is missing or lacks a required column
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", newline="", encoding="utf-8") as f:
            return ingest(f)

    reader = csv.DictReader(source)
    header = reader.fieldnames
    if not header:
        raise IngestHeaderError("CSV has no header row")
    header = [h.strip() for h in header]
    reader.fieldnames = header
    missing = [c for c in REQUIRED_COLUMNS if c not in header]
    if missing:
        raise IngestHeaderError(f"CSV header lacks required column(s): {', '.join(missing)}")

    report = IngestReport()
    for row in reader:
        try:
            report.records.append(_parse_row(row))
        except ValueError as e:
            report.errors.append(RowError(reader.line_num, str(e)))

    if report.errors:
        logger.warning(f"Skipped {len(report.errors)} malformed row(s); first: {report.errors[0]}")
    logger.info(f"Ingested {len(report.records)} historical record(s)")
    return report


def export_records(records: Iterable[HistoricalRecord], destination: Union[str, Path, TextIO]) -> int:
    """
    Write records in the ingestion schema; floats keep full precision.

    Args:
        records: Records to write
        destination: File path (parent directories are created) or text stream

    Returns:
        Number of records written
    """
    if isinstance(destination, (str, Path)):
        path = Path(destination)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as f:
            count = export_records(records, f)
        logger.info(f"Exported {count} record(s) to {path}")
        return count

    writer = csv.DictWriter(destination, fieldnames=COLUMNS)
    writer.writeheader()
    count = 0
    for record in records:
        writer.writerow({
            "test_id": record.test_id,
            "primary_dim": record.primary_dim,
            "primary_effect": repr(record.primary_effect),
            "secondary_effect": "" if record.secondary_effect is None else repr(record.secondary_effect),
            "adopted": "" if record.adopted is None else str(record.adopted).lower(),
        })
        count += 1
    return count


def records_to_csv_text(records: Iterable[HistoricalRecord]) -> str:
    """Render records as CSV text."""
    buffer = io.StringIO()
    export_records(records, buffer)
    return buffer.getvalue()
