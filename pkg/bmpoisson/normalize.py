from __future__ import annotations

import enum
import math
from fractions import Fraction
from typing import Any

import numpy as np


def sanitize_floats(obj: Any) -> Any:
    """Return a copy of *obj* where floating NaN and ±Inf are replaced by ``None``.

    The transformation recurses into lists, tuples, and dicts. All other types are
    returned unchanged. JSON has no spelling for non-finite floats.
    """
    if isinstance(obj, float):
        if math.isnan(obj) or math.isinf(obj):
            return None
        return obj
    if isinstance(obj, list):
        return [sanitize_floats(x) for x in obj]
    if isinstance(obj, tuple):
        return tuple(sanitize_floats(x) for x in obj)
    if isinstance(obj, dict):
        return {k: sanitize_floats(v) for k, v in obj.items()}
    return obj


def to_jsonable(obj: Any) -> Any:
    """
    Convert domain values into plain JSON data.

    Fractions and polynomials become strings in the polynomial grammar,
    multivectors use the ``{"grade", "terms"}`` interchange format, numpy
    scalars and arrays become Python numbers and lists, enums their value.
    Non-string dict keys are stringified.
    """
    # local imports: poly/multivector import this package's typing layer
    from .multivector import MultiVector, multivector_to_json
    from .poly import Polynomial, format_polynomial

    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, int)):
        return obj
    if isinstance(obj, float):
        return sanitize_floats(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, Polynomial):
        return format_polynomial(obj)
    if isinstance(obj, MultiVector):
        return multivector_to_json(obj)
    if isinstance(obj, enum.Enum):
        return to_jsonable(obj.value)
    if isinstance(obj, np.generic):
        return to_jsonable(obj.item())
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, dict):
        return {str(k) if not isinstance(k, str) else k: to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if hasattr(obj, "to_json"):
        return to_jsonable(obj.to_json())
    return repr(obj)
