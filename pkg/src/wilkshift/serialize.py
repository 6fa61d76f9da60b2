"""Decimal-string serialization of library objects to JSON and CSV.

Numbers never pass through binary floats: every mpf is written in
scientific decimal notation with a fixed number of significant digits,
and dataclasses are emitted field by field in declaration order, so equal
inputs give byte-identical artifacts.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
from decimal import Decimal
from fractions import Fraction

from mpmath.libmp import to_str


def dec(value, digits: int) -> str:
    """Scientific decimal string of an mpf with ``digits`` significant digits."""
    text = to_str(value._mpf_, digits)
    return f"{Decimal(text).normalize():e}"


def _is_mpf(value) -> bool:
    return hasattr(value, "_mpf_")


def to_plain(obj, digits: int):
    """Convert dataclasses, mpf values and containers to JSON-ready data."""
    if _is_mpf(obj):
        return dec(obj, digits)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else str(obj.numerator)
    if isinstance(obj, float):
        raise TypeError("binary floats are not serialized; convert to mpf first")
    if dataclasses.is_dataclass(obj):
        return {f.name: to_plain(getattr(obj, f.name), digits) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_plain(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v, digits) for v in obj]
    return str(obj)


def dumps_json(obj, digits: int) -> str:
    return json.dumps(to_plain(obj, digits), indent=2, ensure_ascii=False) + "\n"


def dumps_csv(rows, digits: int) -> str:
    """CSV text with a header row taken from the first row's keys."""
    rows = [to_plain(r, digits) for r in rows]
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow({k: "" if v is None else v for k, v in r.items()})
    return buf.getvalue()
