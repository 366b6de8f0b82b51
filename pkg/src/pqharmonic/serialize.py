"""Canonical JSON emission: 17 significant digits, fixed key order.

Identical inputs serialize to identical bytes, which makes report files
diffable across runs and machines.
"""

from __future__ import annotations

import json
import math


def format_float(x: float) -> str:
    if isinstance(x, float) and (math.isnan(x) or math.isinf(x)):
        raise ValueError(f"cannot serialize non-finite value {x!r}")
    return format(float(x), ".17g")


def dumps(obj, indent: int = 0) -> str:
    """Serialize dicts/lists/scalars; floats printed with 17 significant digits."""
    pad = " " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        inner_pad = " " * (indent + 2)
        items = [
            f"{inner_pad}{json.dumps(str(k))}: {dumps(v, indent + 2)}"
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if len(obj) == 0:
            return "[]"
        inner_pad = " " * (indent + 2)
        items = [f"{inner_pad}{dumps(v, indent + 2)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int,)):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    # numpy scalars and anything float-like
    try:
        return format_float(float(obj))
    except (TypeError, ValueError):
        raise TypeError(f"cannot serialize {type(obj).__name__}: {obj!r}") from None
