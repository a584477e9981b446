"""
Emission of JSON records and CSV dumps.

JSON floats use Python's shortest round-trip representation (never more
than 17 significant digits, and exact on re-read). CSV cells are written
with exactly 17 significant digits. Output is a pure function of the data,
so a fixed seed reproduces files byte for byte.
"""

import csv
import io
import json
import math
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path
from typing import Any, TextIO

import numpy as np

CSV_DIGITS = 17


def round_significant(value: float, digits: int) -> float:
    if not math.isfinite(value) or value == 0.0:
        return value
    return float(f"{value:.{digits}g}")


def to_plain(data: Any) -> Any:
    """Convert serializer output (ReturnDict, numpy scalars, tuples) to JSON types."""
    if isinstance(data, Mapping):
        return {str(key): to_plain(value) for key, value in data.items()}
    if isinstance(data, list | tuple):
        return [to_plain(value) for value in data]
    if isinstance(data, np.ndarray):
        return [to_plain(value) for value in data.tolist()]
    if isinstance(data, np.generic):
        return to_plain(data.item())
    if isinstance(data, float) and not math.isfinite(data):
        return None
    return data


def render_json(data: Any) -> str:
    return json.dumps(to_plain(data), indent=2, ensure_ascii=False) + "\n"


def format_cell(value: object) -> str:
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, int | np.integer):
        return str(int(value))
    if isinstance(value, float | np.floating):
        return f"{float(value):.{CSV_DIGITS}g}"
    return str(value)


def render_csv(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_cell(value) for value in row])
    return buffer.getvalue()


def write_output(text: str, out_path: str | None, stream: TextIO) -> None:
    """Write ``text`` to ``out_path`` when given, otherwise to ``stream``."""
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        stream.write(text)
