"""Stable JSON rendering for reports."""
from __future__ import annotations

import json
import math
from fractions import Fraction

import numpy as np

SCHEMA = "lpx-1"


def _num(x: float):
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    if x == 0:
        return 0.0
    return float(f"{x:.12g}")


def to_jsonable(obj):
    """Recursively convert numpy / complex / Fraction values; floats keep 12
    significant digits, complex numbers become ``{"re", "im"}``."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _num(obj.real), "im": _num(obj.imag)}
    if isinstance(obj, (float, np.floating, Fraction)):
        return _num(obj)
    return obj


def p_star_text(p: float) -> str:
    """Four significant digits, trailing zeros kept; infinity as ``inf``."""
    return "inf" if math.isinf(p) else f"{p:#.4g}"


def p_star_json(p: float):
    return "inf" if math.isinf(p) else float(f"{p:.4g}")


def dumps(payload: dict) -> str:
    body = {"schema": SCHEMA}
    body.update(to_jsonable(payload))
    return json.dumps(body, indent=2, sort_keys=False)
