"""Tabular writers: CSV with '#' metadata headers, or a single JSON document."""

from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from .errors import ConvergenceError


def _check_finite(columns: dict) -> None:
    for name, col in columns.items():
        arr = np.asarray(col)
        if arr.dtype.kind in "fc" and not np.all(np.isfinite(arr)):
            raise ConvergenceError(f"non-finite values in output column {name!r}")


def _cell(value):
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)


def _meta_value(value):
    if isinstance(value, (list, tuple, np.ndarray)):
        return ", ".join(_cell(v) for v in value)
    return _cell(value)


def render_csv(columns: dict, meta: dict) -> str:
    _check_finite(columns)
    buf = io.StringIO()
    for key, value in meta.items():
        buf.write(f"# {key}: {_meta_value(value)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    names = list(columns)
    writer.writerow(names)
    for row in zip(*(columns[n] for n in names)):
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _jsonable(value):
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, float) and not math.isfinite(value):
        raise ConvergenceError("non-finite value in output metadata")
    return value


def render_json(columns: dict, meta: dict) -> str:
    _check_finite(columns)
    doc = {"meta": _jsonable(meta), "columns": _jsonable(columns)}
    return json.dumps(doc, indent=1) + "\n"


def render(columns: dict, meta: dict, fmt: str) -> str:
    return render_json(columns, meta) if fmt == "json" else render_csv(columns, meta)


def read_csv(text: str) -> tuple[dict, dict]:
    """Inverse of :func:`render_csv` for numeric tables (metadata as strings)."""
    meta, body = {}, []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(":")
            meta[key.strip()] = value.strip()
        elif line:
            body.append(line)
    rows = list(csv.reader(body))
    names = rows[0]
    columns = {}
    for k, name in enumerate(names):
        cells = [r[k] for r in rows[1:]]
        try:
            columns[name] = np.array([float(c) for c in cells])
        except ValueError:
            columns[name] = cells
    return columns, meta
