"""Deterministic JSON emission: floats carry 17 significant digits (decimal
round-trip exact for doubles), keys keep insertion order, so identical inputs
produce byte-identical output."""

from __future__ import annotations

import json
import math

import numpy as np


def _format_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def dumps_canonical(obj, indent: int = 0) -> str:
    pad = " " * indent
    if obj is None:
        return "null"
    if isinstance(obj, bool) or isinstance(obj, np.bool_):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, complex):
        return dumps_canonical({"re": obj.real, "im": obj.imag}, indent)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return dumps_canonical(obj.tolist(), indent)
    if isinstance(obj, (list, tuple)):
        inner = ", ".join(dumps_canonical(v, indent) for v in obj)
        return f"[{inner}]"
    if isinstance(obj, dict):
        items = ",\n".join(
            f'{pad}  {json.dumps(str(k))}: {dumps_canonical(v, indent + 2)}'
            for k, v in obj.items()
        )
        return "{\n" + items + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def format_csv_row(values) -> str:
    cells = []
    for v in values:
        if isinstance(v, (float, np.floating)):
            cells.append(format(float(v), ".17g"))
        elif isinstance(v, (bool, np.bool_)):
            cells.append("1" if v else "0")
        else:
            cells.append(str(v))
    return ",".join(cells)
