"""
Number formatting for command output.

JSON floats carry 12 significant digits, thresholds 6 decimals, and CSV
cells are written locale-independently.
"""

from enum import Enum
from typing import Any

JSON_DIGITS = 12


def round_sig(value: float, digits: int = JSON_DIGITS) -> float:
    """
    Round to a number of significant digits.

    Examples:
        >>> round_sig(0.1707512345678901)
        0.170751234568
        >>> round_sig(0.0)
        0.0
        >>> round_sig(-2.5e-17, 3)
        -2.5e-17
    """
    if value == 0 or value != value or value in (float("inf"), float("-inf")):
        return value
    return float(f"{value:.{digits - 1}e}")


def json_ready(data: Any, digits: int = JSON_DIGITS) -> Any:
    """
    Recursively round floats and unwrap enums for json.dumps.

    Examples:
        >>> json_ready({"q": [1.0, 1 / 3]})
        {'q': [1.0, 0.333333333333]}
    """
    if isinstance(data, bool) or isinstance(data, int):
        return data
    if isinstance(data, float):
        return round_sig(data, digits)
    if isinstance(data, Enum):
        return data.value
    if isinstance(data, dict):
        return {key: json_ready(value, digits) for key, value in data.items()}
    if isinstance(data, (list, tuple)):
        return [json_ready(value, digits) for value in data]
    return data


def format_threshold(value: float) -> str:
    """
    Threshold with 6 decimals.

    Examples:
        >>> format_threshold(3.16581234)
        '3.165812'
    """
    return f"{value:.6f}"


def format_csv_cell(value: Any) -> str:
    """
    CSV cell text: repr-precision floats with a decimal point, enum values.

    Examples:
        >>> format_csv_cell(0.25)
        '0.25'
        >>> format_csv_cell(2)
        '2'
    """
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, float):
        return repr(value)
    return str(value)
