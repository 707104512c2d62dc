"""CSV, ``.dat`` and request-list files.

Every file starts with a ``# format-version 1`` line and writes floats in
shortest round-trip form, so identical inputs give byte-identical output.
"""
from __future__ import annotations

import csv
import io
import math
import statistics
from pathlib import Path

from .exceptions import GraphFormatError
from .graph import FORMAT_VERSION, ConstraintSpec, format_float

HEADER = f"# format-version {FORMAT_VERSION}\n"


def _cell(x):
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return format_float(x)
    if x is None:
        return ""
    return str(x)


def write_csv(dest, fields, rows, footer=None) -> None:
    """Rows are dicts or sequences; ``footer`` is one extra row (e.g. totals)."""
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            write_csv(fh, fields, rows, footer)
        return
    dest.write(HEADER)
    w = csv.writer(dest, lineterminator="\n")
    w.writerow(fields)
    for row in list(rows) + ([footer] if footer is not None else []):
        if isinstance(row, dict):
            row = [row.get(f) for f in fields]
        w.writerow([_cell(x) for x in row])


def read_csv(src) -> tuple[list, list]:
    """Header fields and rows (dicts of strings) of a file written by :func:`write_csv`."""
    if isinstance(src, (str, Path)):
        with open(src, encoding="utf-8", newline="") as fh:
            return read_csv(fh)
    first = src.readline()
    if first.strip() != HEADER.strip():
        raise GraphFormatError(f"expected {HEADER.strip()!r}", 1)
    reader = csv.reader(src)
    try:
        fields = next(reader)
    except StopIteration:
        raise GraphFormatError("missing CSV header row", 2) from None
    rows = []
    for i, rec in enumerate(reader, 3):
        if len(rec) != len(fields):
            raise GraphFormatError(f"expected {len(fields)} columns, got {len(rec)}", i)
        rows.append(dict(zip(fields, rec)))
    return fields, rows


def ci95(values) -> tuple[float, float]:
    """Mean and normal-approximation 95% half-width (zero for fewer than two values)."""
    vals = [float(v) for v in values]
    if not vals:
        return math.nan, math.nan
    mean = math.fsum(vals) / len(vals)
    if len(vals) < 2:
        return mean, 0.0
    return mean, 1.96 * statistics.stdev(vals) / math.sqrt(len(vals))


def write_dat(dest, series, title: str = "") -> None:
    """``x mean ci95`` lines; ``series`` maps each x to the per-seed values."""
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="\n") as fh:
            write_dat(fh, series, title)
        return
    dest.write(HEADER)
    if title:
        dest.write(f"# {title}\n")
    dest.write("# x mean ci95\n")
    for x in sorted(series):
        mean, half = ci95(series[x])
        dest.write(f"{_cell(x)} {format_float(mean)} {format_float(half)}\n")


def dump_requests(requests) -> str:
    """``req <src> <dst> <demand> <path bounds...>`` lines."""
    buf = io.StringIO()
    buf.write(HEADER)
    for src, dst, spec in requests:
        if spec.link_bounds:
            raise GraphFormatError("request files carry path bounds only")
        fields = [str(src), str(dst), format_float(spec.demand)]
        fields += [format_float(b) for b in spec.path_bounds]
        buf.write("req " + " ".join(fields) + "\n")
    return buf.getvalue()


def load_requests(text: str) -> list:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if tok[0] != "req" or len(tok) < 4:
            raise GraphFormatError("expected 'req <src> <dst> <demand> <bounds...>'", lineno)
        try:
            spec = ConstraintSpec(float(tok[3]), (), tuple(float(x) for x in tok[4:]))
            out.append((int(tok[1]), int(tok[2]), spec))
        except ValueError as exc:
            raise GraphFormatError(str(exc), lineno) from exc
    return out
