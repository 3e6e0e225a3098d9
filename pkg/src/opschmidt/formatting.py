from __future__ import annotations

import json
import math
from typing import Any, Iterable, Sequence

from pydantic import BaseModel


DEFAULT_DIGITS = 10


def format_real(value: float, digits: int = DEFAULT_DIGITS) -> str:
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    text = f"{value:.{digits}g}"
    # Rounding can leave "-0"; print it as plain zero.
    if float(text) == 0.0:
        return "0"
    return text


def format_complex(value: complex, digits: int = DEFAULT_DIGITS) -> str:
    real = format_real(value.real, digits)
    imag = format_real(abs(value.imag), digits)
    if imag == "0":
        return real
    sign = "-" if value.imag < 0 else "+"
    if real == "0":
        return f"{'-' if sign == '-' else ''}{imag}j"
    return f"{real}{sign}{imag}j"


def format_coefficients(values: Iterable[float], digits: int = 6) -> str:
    return ", ".join(format_real(float(v), digits) for v in values)


def format_flag(value: bool | None) -> str:
    if value is None:
        return "-"
    return "yes" if value else "no"


def render_table(headers: Sequence[str], rows: Iterable[Sequence[object]]) -> list[str]:
    cells = [[str(h) for h in headers]] + [[_cell(value) for value in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(headers))]
    lines = []
    for index, row in enumerate(cells):
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
        if index == 0:
            lines.append("  ".join("-" * width for width in widths))
    return lines


def dump_json(payload: BaseModel | list[BaseModel], exclude: dict[str, Any] | None = None) -> str:
    if isinstance(payload, list):
        data: object = [item.model_dump(by_alias=True, exclude=exclude) for item in payload]
    else:
        data = payload.model_dump(by_alias=True, exclude=exclude)
    return json.dumps(data, indent=2, ensure_ascii=True)


def _cell(value: object) -> str:
    if isinstance(value, bool):
        return format_flag(value)
    if value is None:
        return "-"
    if isinstance(value, float):
        return format_real(value, 6)
    if isinstance(value, complex):
        return format_complex(value, 6)
    return str(value)
