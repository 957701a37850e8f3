"""Matrix files.

CSV: first line ``n``, then ``n`` lines of ``n`` comma-separated decimals.
JSON: ``{"n": int, "rows": [[...], ...], "provenance": {...}}``.
Floats are written with 17 significant digits, which round-trips float64
exactly.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import MatrixFormatError
from .linalg import as_matrix

FORMATS = ("csv", "json")


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def infer_format(path) -> str:
    return "json" if str(path).lower().endswith(".json") else "csv"


def dumps_matrix(m, fmt: str = "csv", provenance: dict | None = None) -> str:
    a = as_matrix(m)
    n = a.shape[0]
    if fmt == "csv":
        lines = [str(n)] + [",".join(_fmt(v) for v in row) for row in a]
        return "\n".join(lines) + "\n"
    if fmt == "json":
        # json.dumps uses repr(), the shortest string that round-trips
        doc = {"n": n, "rows": a.tolist(), "provenance": provenance or {}}
        return json.dumps(doc, default=_json_default) + "\n"
    raise MatrixFormatError(f"unknown format {fmt!r}")


def _json_default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")


def write_matrix(obj, path, fmt: str | None = None) -> Path:
    """Write a matrix or a ``ConstructionResult`` (provenance kept in JSON)."""
    path = Path(path)
    fmt = fmt or infer_format(path)
    provenance = getattr(obj, "provenance", None)
    matrix = getattr(obj, "matrix", obj)
    path.write_text(dumps_matrix(matrix, fmt, provenance))
    return path


def _parse_csv(text: str) -> np.ndarray:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MatrixFormatError("empty file")
    try:
        n = int(lines[0])
    except ValueError:
        raise MatrixFormatError(f"first line must be the order n, got {lines[0]!r}") from None
    rows = lines[1:]
    if n < 1 or len(rows) != n:
        raise MatrixFormatError(f"expected {n} rows, found {len(rows)}")
    out = np.empty((n, n))
    for i, ln in enumerate(rows):
        cells = ln.split(",")
        if len(cells) != n:
            raise MatrixFormatError(f"row {i + 1} has {len(cells)} entries, expected {n}")
        try:
            out[i] = [float(c) for c in cells]
        except ValueError as exc:
            raise MatrixFormatError(f"row {i + 1}: {exc}") from None
    return out


def _parse_json(text: str) -> tuple[np.ndarray, dict]:
    try:
        doc = json.loads(text)
        n, rows = int(doc["n"]), doc["rows"]
    except (ValueError, KeyError, TypeError) as exc:
        raise MatrixFormatError(f"bad matrix JSON: {exc}") from None
    if n < 1 or not isinstance(rows, list) or len(rows) != n or any(
            not isinstance(r, list) or len(r) != n for r in rows):
        raise MatrixFormatError(f"rows do not form an {n} x {n} grid")
    try:
        a = np.array(rows, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise MatrixFormatError(f"non-numeric entry: {exc}") from None
    return a, doc.get("provenance") or {}


def read_matrix_with_provenance(path) -> tuple[np.ndarray, dict]:
    path = Path(path)
    text = path.read_text()
    if infer_format(path) == "json":
        a, prov = _parse_json(text)
    else:
        a, prov = _parse_csv(text), {}
    if not np.all(np.isfinite(a)):
        raise MatrixFormatError("matrix has non-finite entries")
    return as_matrix(a), prov


def read_matrix(path) -> np.ndarray:
    return read_matrix_with_provenance(path)[0]
