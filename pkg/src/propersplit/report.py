"""Deterministic report serialization.

Reports are plain nested structures of dicts, lists, strings, booleans and
numbers.  ``dumps`` renders them as JSON with sorted keys and floats
printed with 17 significant digits, so equal reports serialize to
identical bytes and every float round-trips exactly.
"""

from __future__ import annotations

import json
import math


def fmt_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"reports only carry finite numbers, got {x}")
    return format(x, ".17g")


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * level)
    inner = " " * (indent * (level + 1))
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [_encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(inner + it for it in items) + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        parts = []
        for key in sorted(obj):
            if not isinstance(key, str):
                raise TypeError(f"report keys must be strings, got {type(key).__name__}")
            parts.append(
                inner + json.dumps(key) + ": " + _encode(obj[key], indent, level + 1)
            )
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__} in a report")


def dumps(obj, indent: int = 2) -> str:
    """Render a report as deterministic JSON text."""
    return _encode(obj, indent, 0) + "\n"


def csv_rows(header, rows) -> str:
    """Render a delimited table with floats at 17 significant digits."""
    def cell(v):
        if isinstance(v, bool):
            return "true" if v else "false"
        if isinstance(v, float):
            return fmt_float(v)
        return str(v)

    lines = [",".join(header)]
    lines.extend(",".join(cell(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"
