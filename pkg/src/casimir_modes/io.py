"""CSV and JSON emission shared by the command-line tools.

CSV follows RFC 4180 (CRLF records, header row, ``.`` decimals); floats
are written in scientific notation with 16 significant digits so that
rows parse back to the same doubles.
"""
from __future__ import annotations

import csv
import io as _io
import math
from typing import Iterable, Mapping, Sequence


def format_value(x):
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return f"{x:.15e}"
    return x


def write_csv(stream, columns: Sequence[str], rows: Iterable[Sequence]):
    w = csv.writer(stream, lineterminator="\r\n")
    w.writerow(columns)
    for row in rows:
        if len(row) != len(columns):
            raise ValueError(f"row has {len(row)} fields, header has {len(columns)}")
        w.writerow([format_value(x) for x in row])


def csv_text(columns, rows) -> str:
    buf = _io.StringIO()
    write_csv(buf, columns, rows)
    return buf.getvalue()


def _parse_optional(cast):
    return lambda s: None if s == "" else cast(s)


def read_csv(stream, schema: Mapping[str, type] | None = None):
    """Parse a CSV written by ``write_csv`` into a list of dicts.

    ``schema`` maps column names to casts (``float``, ``int``, ``str``);
    empty fields become ``None``.
    """
    reader = csv.DictReader(stream)
    out = []
    for row in reader:
        rec = {}
        for key, val in row.items():
            cast = (schema or {}).get(key, str)
            rec[key] = _parse_optional(cast)(val)
        out.append(rec)
    return out
