"""
Plain-text report generation for CLI results.

Tables are a convenience view; JSON and CSV are the stable output contracts.
"""

import logging
import math
from typing import Any, Dict, List, Optional, Sequence

logger = logging.getLogger(__name__)


class ReportGenerator:
    """
    Render result dictionaries as aligned plain-text reports.

    Every report starts with a parameter block echoing the resolved inputs.
    """

    def __init__(self, precision: int = 6, width: int = 60):
        """
        Initialize report generator.

        Args:
            precision: Significant digits for floats
            width: Width of the title rule
        """
        self.precision = precision
        self.width = width

    def format_value(self, value: Any) -> str:
        """Format a scalar or sequence for display."""
        if value is None:
            return "n/a"
        if isinstance(value, bool):
            return "yes" if value else "no"
        if isinstance(value, float):
            if math.isinf(value):
                return "inf" if value > 0 else "-inf"
            return f"{value:.{self.precision}g}"
        if isinstance(value, (list, tuple)):
            return "(" + ", ".join(self.format_value(v) for v in value) + ")"
        if isinstance(value, dict):
            return ", ".join(f"{k}={self.format_value(v)}" for k, v in value.items())
        return str(value)

    def generate_parameter_block(self, parameters: Dict[str, Any]) -> List[str]:
        """Key/value lines for the resolved parameters."""
        if not parameters:
            return []
        key_width = max(len(k) for k in parameters)
        lines = ["Parameters", "-" * self.width]
        for key, value in parameters.items():
            lines.append(f"  {key.ljust(key_width)}  {self.format_value(value)}")
        return lines

    def generate_key_values(self, values: Dict[str, Any]) -> List[str]:
        if not values:
            return []
        key_width = max(len(k) for k in values)
        return [f"  {k.ljust(key_width)}  {self.format_value(v)}" for k, v in values.items()]

    def generate_table(self, rows: Sequence[Dict[str, Any]], columns: Optional[Sequence[str]] = None) -> List[str]:
        """
        Aligned table of homogeneous rows.

        Args:
            rows: Row dictionaries
            columns: Column order (keys of the first row if not provided)

        Returns:
            Table lines, header first
        """
        if not rows:
            return ["  (no rows)"]
        columns = list(columns or rows[0].keys())
        cells = [[self.format_value(row.get(c)) for c in columns] for row in rows]
        widths = [max(len(c), *(len(r[i]) for r in cells)) for i, c in enumerate(columns)]
        lines = ["  ".join(c.rjust(w) for c, w in zip(columns, widths))]
        lines.append("  ".join("-" * w for w in widths))
        lines.extend("  ".join(v.rjust(w) for v, w in zip(r, widths)) for r in cells)
        return lines

    def generate_text_report(
        self,
        title: str,
        parameters: Dict[str, Any],
        result: Optional[Dict[str, Any]] = None,
        rows: Optional[Sequence[Dict[str, Any]]] = None,
        notes: Optional[Sequence[str]] = None,
    ) -> str:
        """
        Generate a complete plain-text report.

        Args:
            title: Report title
            parameters: Resolved parameters echoed in the header block
            result: Scalar results shown as key/value lines
            rows: Optional tabular section
            notes: Optional trailing notes (caveats, warnings)

        Returns:
            Report text ending in a newline
        """
        lines = [title, "=" * self.width]
        lines.extend(self.generate_parameter_block(parameters))
        if result:
            lines.append("")
            lines.append("Result")
            lines.append("-" * self.width)
            lines.extend(self.generate_key_values(result))
        if rows is not None:
            lines.append("")
            lines.extend(self.generate_table(rows))
        if notes:
            lines.append("")
            lines.append("Notes")
            lines.append("-" * self.width)
            lines.extend(f"  - {note}" for note in notes)
        return "\n".join(lines) + "\n"
