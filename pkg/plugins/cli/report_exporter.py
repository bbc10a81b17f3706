"""
Report Exporter Module

Renders command reports as human-readable text, as line-oriented key=value
records, and as CSV tables written through pandas.
"""
import os
import shlex
from dataclasses import dataclass, field
from datetime import datetime
from typing import Dict, List
import sys

import pandas as pd

# Add parent directory to path for config import
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

from config.config import OUTPUT_DIR, CSV_FILENAME_PREFIX


@dataclass
class Report:
    """
    Everything a command emits.

    facts are the scalar results (also shown in the summary lines); tables
    map a table name to its rows, each row a flat dict.
    """
    command: str
    model: str
    max_degree: int
    summary: List[str] = field(default_factory=list)
    facts: Dict[str, object] = field(default_factory=dict)
    tables: Dict[str, List[Dict]] = field(default_factory=dict)

    def add_table(self, name: str, rows: List[Dict]) -> None:
        self.tables[name] = rows


def _value(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    return str(value)


def _record(pairs: Dict[str, object]) -> str:
    return " ".join(f"{key}={shlex.quote(_value(value))}" for key, value in pairs.items())


def to_dataframe(rows: List[Dict]) -> pd.DataFrame:
    """Rows as a DataFrame with None shown as '-' and booleans as yes/no."""
    if not rows:
        return pd.DataFrame()
    return pd.DataFrame([{key: _value(value) for key, value in row.items()} for row in rows])


def render_text(report: Report) -> str:
    lines = [
        "=" * 60,
        f"{report.command}: {report.model} (max degree {report.max_degree})",
        "=" * 60,
    ]
    lines.extend(report.summary)
    for key, value in report.facts.items():
        lines.append(f"  {key}: {_value(value)}")
    for name, rows in report.tables.items():
        lines.append("")
        lines.append(f"[{name}]")
        if rows:
            lines.append(to_dataframe(rows).to_string(index=False))
        else:
            lines.append("(empty)")
    return "\n".join(lines) + "\n"


def render_records(report: Report) -> str:
    """
    One record per line:

        record=command command=mtc model=nonformal_wedge max_degree=12 lower=3 ...
        record=<table> <column>=<value> ...

    Values containing whitespace are shell-quoted.
    """
    header = {"record": "command", "command": report.command, "model": report.model, "max_degree": report.max_degree}
    header.update(report.facts)
    lines = [_record(header)]
    for name, rows in report.tables.items():
        for row in rows:
            lines.append(_record({"record": name, **row}))
    return "\n".join(lines) + "\n"


def parse_records(text: str) -> List[Dict[str, str]]:
    """Inverse of render_records, for consumers and tests."""
    records = []
    for line in text.splitlines():
        if not line.strip():
            continue
        records.append(dict(part.split("=", 1) for part in shlex.split(line)))
    return records


def ensure_output_dir(directory: str = OUTPUT_DIR) -> None:
    """Create output directory if it doesn't exist."""
    if not os.path.exists(directory):
        os.makedirs(directory)


def export_to_csv(report: Report, path: str = "") -> List[str]:
    """
    Write every table of the report to CSV.

    With an empty path the files go to OUTPUT_DIR under a timestamped name;
    otherwise the path is used for the first table and suffixed for the rest.

    Returns:
        list: Paths of the written files
    """
    if not path:
        ensure_output_dir()
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        path = os.path.join(OUTPUT_DIR, f"{CSV_FILENAME_PREFIX}_{report.command}_{timestamp}.csv")
    else:
        directory = os.path.dirname(path)
        if directory:
            ensure_output_dir(directory)

    stem, extension = os.path.splitext(path)
    written = []
    for position, (name, rows) in enumerate(report.tables.items()):
        target = path if position == 0 else f"{stem}_{name}{extension or '.csv'}"
        df = to_dataframe(rows)
        if rows:
            df.insert(0, "model", report.model)
        df.to_csv(target, index=False, encoding="utf-8")
        written.append(target)
    return written
