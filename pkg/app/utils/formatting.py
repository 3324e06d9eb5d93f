"""
Report serialization for the CLI and the HTTP layer.

JSON reports carry "schema": settings.SCHEMA_VERSION and print every float
with 17 significant digits, so identical runs produce identical bytes.
Non-finite floats become null. CSV reports flatten report_rows().
"""
from typing import Any, Dict, Iterable, List
import csv
import io
import json
import math

import numpy as np

from app.config import settings
from app.errors import HeisgeomError


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def to_plain(obj: Any) -> Any:
    """numpy scalars and arrays, tuples and objects with to_dict() as JSON-ready values"""
    if hasattr(obj, "to_dict"):
        return to_plain(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        value = float(obj)
        return value if math.isfinite(value) else None
    return obj


def _encode(obj: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k, ensure_ascii=False)}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _encode(v, indent, level + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_json(payload: Any, indent: int = 2) -> str:
    return _encode(to_plain(payload), indent, 0)


def with_schema(payload: Any) -> Dict[str, Any]:
    data = to_plain(payload)
    if not isinstance(data, dict):
        data = {"result": data}
    return {"schema": settings.SCHEMA_VERSION, **data}


def error_object(error: HeisgeomError) -> Dict[str, Any]:
    return {"schema": settings.SCHEMA_VERSION, "error": to_plain(error.to_dict())}


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format_float(value) if math.isfinite(value) else ""
    if isinstance(value, (dict, list)):
        return to_json(value, indent=0).replace("\n", "")
    return str(value)


def to_csv(rows: Iterable[Dict[str, Any]]) -> str:
    """Rows as CSV; the header is the union of keys in first-seen order"""
    rows = [to_plain(r) for r in rows]
    fields: List[str] = []
    for row in rows:
        fields.extend(k for k in row if k not in fields)
    out = io.StringIO()
    writer = csv.DictWriter(out, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _cell(row.get(k)) for k in fields})
    return out.getvalue()
