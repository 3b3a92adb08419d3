"""Deterministic CSV/JSON table output.

CSV: header row, comma separated, floats with 17 significant digits, empty
field for undefined values. JSON: ``{"meta": {...}, "rows": [{...}, ...]}``
with the same column order; undefined values are ``null``.
"""
from __future__ import annotations

import csv
import io
import json
import math
from datetime import datetime, timezone

import numpy as np


def _scalar(value):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return None if math.isnan(value) else value
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def format_csv_value(value) -> str:
    value = _scalar(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def render_csv(columns: list[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_csv_value(v) for v in row])
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    return _scalar(obj)


def render_json(columns: list[str], rows, meta: dict, timestamp: bool = True) -> str:
    meta = dict(_jsonable(meta))
    meta["columns"] = list(columns)
    if timestamp:
        meta["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    body = {
        "meta": meta,
        "rows": [{c: _jsonable(v) for c, v in zip(columns, row)} for row in rows],
    }
    return json.dumps(body, indent=1, allow_nan=False) + "\n"


def render(fmt: str, columns: list[str], rows, meta: dict) -> str:
    rows = list(rows)
    if fmt == "csv":
        return render_csv(columns, rows)
    if fmt == "json":
        return render_json(columns, rows, meta)
    raise ValueError(f"unknown format {fmt!r}")
