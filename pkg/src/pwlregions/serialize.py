"""Deterministic JSON rendering.

The stock ``json`` module prints floats with ``repr``, which is fine for
round-trips but leaves the exact byte sequence up to the shortest-repr
algorithm.  Reports and network files here are compared byte-for-byte
across runs, so every float is rendered with a fixed 17-significant-digit
format (enough to reconstruct the double exactly) and containers are
rendered in insertion order with a fixed layout.
"""

from __future__ import annotations

import json
import math


def format_float(x: float) -> str:
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        raise ValueError("non-finite value in serialized payload")
    return format(x, ".17g")


def _render(obj, out: list, indent: int | None, level: int) -> None:
    pad = "" if indent is None else "\n" + " " * (indent * (level + 1))
    end = "" if indent is None else "\n" + " " * (indent * level)
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if not isinstance(k, str):
                raise TypeError(f"non-string key {k!r}")
            out.append(("," if i else "") + pad)
            out.append(json.dumps(k) + ": ")
            _render(v, out, indent, level + 1)
        out.append(end + "}")
    elif isinstance(obj, (list, tuple)):
        seq = list(obj)
        if not seq:
            out.append("[]")
            return
        out.append("[")
        for i, v in enumerate(seq):
            out.append(("," if i else "") + pad)
            _render(v, out, indent, level + 1)
        out.append(end + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def render_json(obj, indent: int | None = 2) -> str:
    """Render ``obj`` to a JSON string with stable float formatting."""
    out: list = []
    _render(obj, out, indent, 0)
    out.append("\n" if indent is not None else "")
    return "".join(out)
