"""
Output Utilities for ECFCensus
Tabular CSV and versioned JSON writers for result rows
"""
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
from pydantic import BaseModel

from config.settings import settings

logger = logging.getLogger(__name__)


def _flatten(row: Dict[str, Any]) -> Dict[str, Any]:
    """Nested payloads become JSON strings so every CSV cell is scalar"""
    return {key: json.dumps(value, sort_keys=True, default=str) if isinstance(value, (dict, list)) else value
            for key, value in row.items()}


def rows_to_frame(rows: Sequence[Any]) -> pd.DataFrame:
    """DataFrame of pydantic models or plain dicts, columns in field order"""
    records = [row.model_dump() if isinstance(row, BaseModel) else dict(row) for row in rows]
    return pd.DataFrame([_flatten(record) for record in records])


def render(rows: Sequence[Any], fmt: str = "csv") -> str:
    if fmt == "json":
        records = [row.model_dump(mode="json") if isinstance(row, BaseModel) else dict(row) for row in rows]
        document = {"schema_version": settings.json_schema_version, "rows": records}
        return json.dumps(document, indent=2, sort_keys=False, default=str) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown output format {fmt!r}")
    frame = rows_to_frame(rows)
    return frame.to_csv(index=False, lineterminator="\n")


def write_rows(rows: Sequence[Any], fmt: str = "csv", path: Optional[str] = None) -> str:
    """
    Write rows to path (UTF-8) or to stdout

    Returns:
        The rendered text
    """
    text = render(rows, fmt)
    if path:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        logger.info(f"Wrote {len(rows)} rows to {target}")
    else:
        sys.stdout.write(text)
        sys.stdout.flush()
    return text


def summary_counts(rows: List[Any]) -> Dict[str, int]:
    """Passed, failed and unchecked totals of rows with a passed flag"""
    flags = [getattr(row, "passed", None) for row in rows]
    return {
        "passed": sum(flag is True for flag in flags),
        "failed": sum(flag is False for flag in flags),
        "unchecked": sum(flag is None for flag in flags),
    }
