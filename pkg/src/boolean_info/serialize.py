"""Deterministic JSON/CSV text emission with fixed float formatting.

``json.dumps`` writes floats with ``repr``, which is stable but not the
fixed-significant-digit format the CLI promises; this module renders
floats explicitly so the same inputs always produce the same bytes.
Infinite values are written as the strings ``"inf"`` / ``"-inf"`` so the
output stays valid JSON.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Any, Iterable, Mapping, Sequence

JSON_DIGITS = 17
CSV_DIGITS = 12


def format_float(value: float, digits: int) -> str:
    if math.isnan(value):
        raise ValueError("NaN is never emitted")
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    text = format(value, f".{digits}g")
    if text == "-0":
        text = "0"
    return text


def _render(obj: Any, digits: int, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    close = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if math.isinf(obj):
            return json.dumps(format_float(obj, digits))
        return format_float(obj, digits)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, Mapping):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_render(v, digits, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + close + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + _render(v, digits, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + close + "]"
    # numpy scalars and similar
    if hasattr(obj, "item"):
        return _render(obj.item(), digits, indent, level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any, digits: int = JSON_DIGITS, indent: int = 2) -> str:
    """Render ``obj`` as JSON text with ``digits`` significant digits per float."""
    return _render(obj, digits, indent, 0) + "\n"


def parse_extended(value: Any) -> float:
    """Inverse of the infinite-value encoding used by :func:`dumps`."""
    if isinstance(value, str):
        if value in ("inf", "+inf"):
            return math.inf
        if value == "-inf":
            return -math.inf
        raise ValueError(f"not a number: {value!r}")
    return float(value)


def csv_text(columns: Sequence[str], rows: Iterable[Mapping[str, Any]], digits: int = CSV_DIGITS) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        cells = []
        for col in columns:
            v = row.get(col)
            if v is None:
                cells.append("")
            elif isinstance(v, bool):
                cells.append("true" if v else "false")
            elif isinstance(v, float):
                cells.append(format_float(v, digits))
            else:
                cells.append(str(v))
        writer.writerow(cells)
    return buf.getvalue()
