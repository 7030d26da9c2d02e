"""Reading sequences and energy tables from CSV text, and writing JSON.

CSV files have a header line (``n,value`` for sequences, ``N,E_total`` for
oligomer energies), plain decimal numbers and optional ``#`` comment lines.
The path ``-`` reads standard input.
"""

from __future__ import annotations

import csv
import json
import re
import sys
from decimal import Decimal, InvalidOperation
from pathlib import Path

from .core import RealSequence, SeqAccelError, Source

SEQUENCE_HEADER = ("n", "value")
ENERGY_HEADER = ("N", "E_total")


class IoError(SeqAccelError, OSError):
    """The input could not be opened or read."""


class ParseError(SeqAccelError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def read_text(path) -> str:
    if str(path) == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror or exc}") from exc


def parse_rows(text: str, header: tuple[str, str]) -> list[tuple[int, int, Decimal]]:
    """Return ``(line_number, index, value)`` for each data row."""
    rows = []
    seen_header = False
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = [f.strip() for f in next(csv.reader([stripped]))]
        if not seen_header:
            if tuple(fields) != header:
                raise ParseError(f"expected header {','.join(header)!r}, got {stripped!r}", lineno)
            seen_header = True
            continue
        if len(fields) != 2:
            raise ParseError(f"expected 2 fields, got {len(fields)}", lineno)
        try:
            index = int(fields[0])
        except ValueError:
            raise ParseError(f"bad index {fields[0]!r}", lineno) from None
        try:
            value = Decimal(fields[1])
        except InvalidOperation:
            raise ParseError(f"bad number {fields[1]!r}", lineno) from None
        if not value.is_finite():
            raise ParseError(f"non-finite value {fields[1]!r}", lineno)
        rows.append((lineno, index, value))
    if not seen_header:
        raise ParseError(f"missing header {','.join(header)!r}")
    if not rows:
        raise ParseError("no data rows")
    return rows


def parse_sequence(text: str, label: str = "", source=Source.FILE) -> RealSequence:
    if text.lstrip().startswith("{"):
        return sequence_from_json(text, label, source)
    rows = parse_rows(text, SEQUENCE_HEADER)
    for expected, (lineno, n, _) in enumerate(rows):
        if n != expected:
            raise ParseError(f"index {n} out of order, expected {expected}", lineno)
    return RealSequence.from_strings((str(v) for _, _, v in rows), label, source)


def read_sequence(path) -> RealSequence:
    return parse_sequence(read_text(path), label=str(path))


def sequence_from_json(text: str, label: str = "", source=Source.FILE) -> RealSequence:
    """Take the ``k = 0`` column of a tableau written by :func:`tableau_json`."""
    try:
        doc = json.loads(text, parse_float=Decimal, parse_int=Decimal)
        col = next(c for c in doc["columns"] if int(c["k"]) == 0)
        entries = sorted(col["entries"], key=lambda e: int(e["n"]))
        return RealSequence.from_strings((str(e["value"]) for e in entries), label, source)
    except (ValueError, KeyError, TypeError, StopIteration) as exc:
        raise ParseError(f"not a tableau document: {exc}") from None


class _Raw:
    __slots__ = ("text",)

    def __init__(self, text: str):
        self.text = text


def number(x, exact: Decimal | None = None):
    """Wrap a number for :func:`dumps`; exact decimals keep all their digits."""
    if x is None:
        return None
    if exact is not None:
        return _Raw(str(exact))
    x = float(x)
    if x != x:
        return None
    return _Raw(format(x, ".17g"))


_MARK = re.compile(r'"\x00RAW:([^"\x00]*)\x00"')


def dumps(doc, indent: int | None = 2) -> str:
    """``json.dumps`` that writes :func:`number` values verbatim."""
    text = json.dumps(doc, indent=indent, default=lambda o: f"\x00RAW:{o.text}\x00", ensure_ascii=False)
    text = text.replace("\\u0000", "\x00")
    return _MARK.sub(lambda m: m.group(1), text)


def tableau_json(tableau, report=None) -> dict:
    s = tableau.sequence
    exact = s.exact if s is not None else None
    columns = []
    for k in range(tableau.max_order + 1):
        entries = []
        for n, e in enumerate(tableau.column(k)):
            ex = exact[n] if k == 0 and exact is not None else None
            item = {"n": n, "value": number(e.value if e.valid else None, ex), "valid": e.valid}
            if e.reason:
                item["reason"] = e.reason
            entries.append(item)
        columns.append({"k": k, "auxiliary": tableau.is_auxiliary(k), "entries": entries})
    doc = {
        "method": tableau.method.value,
        "params": tableau.config.to_dict() if tableau.config is not None else {},
        "columns": columns,
    }
    if report is not None:
        doc["report"] = report_json(report)
    return doc


def report_json(report) -> dict:
    return {
        "estimate": number(report.estimate),
        "k": report.order_k,
        "n": report.start_n,
        "stage_deltas": [number(d) for d in report.stage_deltas],
        "valid_fraction": number(report.valid_fraction),
        "degraded": report.degraded,
    }
