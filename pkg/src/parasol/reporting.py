"""Canonical report serialization.

Reports must be byte-identical across runs with the same seed, so JSON is
rendered by hand: keys sorted, floats printed with 17 significant digits
(lossless for doubles), no timestamps anywhere.
"""

import json
import math

import numpy as np

__all__ = ["dumps_canonical", "write_report", "SCHEMA_VERSION"]

SCHEMA_VERSION = 1


def _render(obj, indent, level):
    pad = " " * (indent * level)
    pad_in = " " * (indent * (level + 1))
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = []
        for key in sorted(obj, key=str):
            items.append(f'{pad_in}{json.dumps(str(key))}: '
                         f'{_render(obj[key], indent, level + 1)}')
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)) or isinstance(obj, np.ndarray):
        seq = list(obj)
        if not seq:
            return "[]"
        items = [f"{pad_in}{_render(x, indent, level + 1)}" for x in seq]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return '"nan"'
        if math.isinf(x):
            return '"inf"' if x > 0 else '"-inf"'
        return format(x, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj)!r}")


def dumps_canonical(obj, indent=1):
    return _render(obj, indent, 0) + "\n"


def write_report(obj, path):
    payload = dict(obj)
    payload.setdefault("schema_version", SCHEMA_VERSION)
    text = dumps_canonical(payload)
    with open(path, "w") as fh:
        fh.write(text)
    return text
