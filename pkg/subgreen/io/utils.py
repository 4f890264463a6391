"""
Utility functions for encoding and decoding report data and parsing CLI options.

This module turns library results (dataclasses, enums, numpy scalars and arrays,
extended reals) into plain JSON values, with infinities spelled out as the strings
"+inf" and "-inf", and back.

Dependencies:
    - numpy: For recognizing numpy scalars and arrays.
"""

import math
from dataclasses import fields, is_dataclass
from enum import Enum
from typing import Any

import numpy as np

from subgreen.common.exceptions import ScenarioError

POS_INF = "+inf"
NEG_INF = "-inf"


def _encode(obj: Any) -> Any:
    """
    Recursively encode an object into JSON-compatible values.

    Floats that are infinite become "+inf"/"-inf" and NaN becomes None; enums become
    their values, dataclasses and dicts become dicts, tuples and arrays become lists.

    Args:
        obj (Any): The object to encode.

    Returns:
        Any: Encoded object suitable for strict JSON serialization.
    """
    if isinstance(obj, Enum):
        return _encode(obj.value)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if math.isnan(value):
            return None
        if math.isinf(value):
            return POS_INF if value > 0 else NEG_INF
        return value
    if isinstance(obj, np.ndarray):
        return [_encode(v) for v in obj.tolist()]
    if is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: _encode(getattr(obj, f.name)) for f in fields(obj)}
    if isinstance(obj, dict):
        return {str(_encode(k)): _encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    return obj

def _decode(obj: Any) -> Any:
    """
    Recursively decode values previously encoded by _encode, restoring infinities.

    Args:
        obj (Any): The object to decode.

    Returns:
        Any: Decoded object.
    """
    if obj == POS_INF:
        return math.inf
    if obj == NEG_INF:
        return -math.inf
    if isinstance(obj, dict):
        return {k: _decode(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_decode(v) for v in obj]
    return obj

def _parse_tolerance(text: str) -> tuple[str, float]:
    """
    Parse one "name=value" tolerance override.

    Args:
        text (str): The option text.

    Returns:
        tuple[str, float]: The tolerance name and its value.

    Raises:
        ScenarioError: If the text is not of the form name=value with a nonnegative
            number.
    """
    name, sep, value = text.partition("=")
    name = name.strip()
    if not sep or not name:
        raise ScenarioError(f"Tolerance '{text}' is not of the form name=value.")
    try:
        number = float(value)
    except ValueError as e:
        raise ScenarioError(f"Tolerance '{name}' has a non-numeric value:", e) from e
    if not number >= 0:
        raise ScenarioError(f"Tolerance '{name}' must be nonnegative, got {value}.")
    return name, number
