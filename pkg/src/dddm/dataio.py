"""Dataset file I/O, validation, and partitioning utilities.

The dataset wire format is a CSV with header
``ClientID,VisitDate,Diagnostic_H,Diagnostic_P``: ISO dates, diagnostic
fields either the literal NA, empty, or a comma-separated code list
(RFC-4180 quoted when multi-code). Status tables serialize one row per
patient (or per window x patient) with absent dates as NA.

Splitting supports two scalability dimensions: fixed-size groups of
unique patients, and fixed-length time chunks with stride t+1 from the
earliest visit date.
"""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass, field
from datetime import date
from typing import IO, Iterable, Sequence

from .errors import DatasetFormatError, InvalidParameterError
from .models import StatusRecord, VisitRecord, normalize_icd_code

DATASET_COLUMNS = ("ClientID", "VisitDate", "Diagnostic_H", "Diagnostic_P")
_ISO_DATE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}$")
_MISSING = ("", "NA")


@dataclass
class ParseReport:
    """Non-fatal observations collected while reading a dataset."""

    row_count: int = 0
    client_count: int = 0
    warnings: list[str] = field(default_factory=list)


def _parse_code_field(raw: str, line: int) -> frozenset[str]:
    value = raw.strip()
    if value in _MISSING:
        return frozenset()
    codes = set()
    for token in value.split(","):
        try:
            codes.add(normalize_icd_code(token))
        except InvalidParameterError as exc:
            raise DatasetFormatError(str(exc), line=line) from exc
    return frozenset(codes)


def _parse_date(raw: str, line: int) -> date:
    value = raw.strip()
    if not _ISO_DATE_RE.match(value):
        raise DatasetFormatError(
            f"VisitDate {raw!r} is not an ISO date (YYYY-MM-DD)", line=line
        )
    try:
        return date.fromisoformat(value)
    except ValueError as exc:
        raise DatasetFormatError(f"VisitDate {raw!r}: {exc}", line=line) from exc


def parse_dataset(source: IO[str] | IO[bytes] | str | bytes) -> tuple[list[VisitRecord], ParseReport]:
    """Read a dataset CSV into validated visit records.

    Accepts a text/bytes stream or buffer (UTF-8). Unknown columns are
    ignored with a warning; duplicate rows are kept (each row is a
    visit) and noted. Schema violations raise DatasetFormatError with
    the offending 1-based line number.
    """
    text = _as_text(source)
    reader = csv.reader(io.StringIO(text, newline=""))
    report = ParseReport()

    try:
        header = next(reader)
    except StopIteration:
        raise DatasetFormatError("empty file: missing header row", line=1)
    header = [h.strip() for h in header]
    positions = {}
    for name in DATASET_COLUMNS:
        if name not in header:
            raise DatasetFormatError(f"missing required column {name!r}", line=1)
        positions[name] = header.index(name)
    extras = [h for h in header if h not in DATASET_COLUMNS]
    if extras:
        report.warnings.append(f"ignoring unknown columns: {', '.join(extras)}")

    records: list[VisitRecord] = []
    seen_rows: set[tuple[str, str, str, str]] = set()
    for row in reader:
        line = reader.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) < len(header):
            raise DatasetFormatError(
                f"expected {len(header)} fields, found {len(row)}", line=line
            )
        client_id = row[positions["ClientID"]].strip()
        if not client_id:
            raise DatasetFormatError("ClientID must not be empty", line=line)
        visit_date = _parse_date(row[positions["VisitDate"]], line)
        hospital = _parse_code_field(row[positions["Diagnostic_H"]], line)
        physician = _parse_code_field(row[positions["Diagnostic_P"]], line)
        key = (
            client_id,
            visit_date.isoformat(),
            ",".join(sorted(hospital)),
            ",".join(sorted(physician)),
        )
        if key in seen_rows:
            report.warnings.append(f"line {line}: duplicate row retained")
        seen_rows.add(key)
        records.append(
            VisitRecord(
                client_id=client_id,
                visit_date=visit_date,
                hospital_codes=hospital,
                physician_codes=physician,
            )
        )
    report.row_count = len(records)
    report.client_count = len({rec.client_id for rec in records})
    return records, report


def _as_text(source: IO[str] | IO[bytes] | str | bytes) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def _code_field(codes: frozenset[str]) -> str:
    return ",".join(sorted(codes)) if codes else "NA"


def write_dataset(records: Iterable[VisitRecord], dest: IO[str]) -> None:
    """Write visit records as dataset CSV, preserving record order.

    Code sets serialize in ascending order with a fixed "\\n" line
    terminator, so parse -> write round-trips byte-identically.
    """
    writer = csv.writer(dest, lineterminator="\n")
    writer.writerow(DATASET_COLUMNS)
    for rec in records:
        writer.writerow(
            [
                rec.client_id,
                rec.visit_date.isoformat(),
                _code_field(rec.hospital_codes),
                _code_field(rec.physician_codes),
            ]
        )


def dataset_to_csv(records: Iterable[VisitRecord]) -> str:
    buf = io.StringIO()
    write_dataset(records, buf)
    return buf.getvalue()


_STATUS_GROUPS = (
    # (probe field, column headers, row fields)
    ("mh_status", ("MH_Earliest", "MH_Latest", "MH_Status"), ("mh_earliest", "mh_latest", "mh_status")),
    ("su_status", ("SU_Earliest", "SU_Latest", "SU_Status"), ("su_earliest", "su_latest", "su_status")),
    ("mhsu_status", ("MHSU_Status",), ("mhsu_status",)),
    ("window_index", ("Window",), ("window_index",)),
)


def write_status_table(rows: Sequence[StatusRecord], dest: IO[str]) -> None:
    """Write a status table CSV.

    Emits ClientID plus the column groups the rows actually evaluated:
    a mental-health-only run has no SU columns, single-span runs have
    no Window column. Absent dates serialize as NA.
    """
    present = [
        (cols, fields)
        for probe, cols, fields in _STATUS_GROUPS
        if any(getattr(row, probe) is not None for row in rows)
    ]
    writer = csv.writer(dest, lineterminator="\n")
    writer.writerow(["ClientID"] + [c for cols, _ in present for c in cols])
    for row in rows:
        out: list[str] = [row.client_id]
        for _, fields in present:
            for name in fields:
                value = getattr(row, name)
                if value is None:
                    out.append("NA")
                elif isinstance(value, date):
                    out.append(value.isoformat())
                else:
                    out.append(str(value))
        writer.writerow(out)


def status_table_to_csv(rows: Sequence[StatusRecord]) -> str:
    buf = io.StringIO()
    write_status_table(rows, buf)
    return buf.getvalue()


_STATUS_COLUMNS = {
    "MH_Earliest": ("mh_earliest", "date"),
    "MH_Latest": ("mh_latest", "date"),
    "MH_Status": ("mh_status", "status"),
    "SU_Earliest": ("su_earliest", "date"),
    "SU_Latest": ("su_latest", "date"),
    "SU_Status": ("su_status", "status"),
    "MHSU_Status": ("mhsu_status", "status"),
    "Window": ("window_index", "int"),
}


def read_status_table(source: IO[str] | IO[bytes] | str | bytes) -> list[StatusRecord]:
    """Read a status table CSV back into records (inverse of write)."""
    text = _as_text(source)
    reader = csv.reader(io.StringIO(text, newline=""))
    try:
        header = next(reader)
    except StopIteration:
        raise DatasetFormatError("empty file: missing header row", line=1)
    if "ClientID" not in header:
        raise DatasetFormatError("missing required column 'ClientID'", line=1)
    rows = []
    for row in reader:
        if not row or all(not cell.strip() for cell in row):
            continue
        line = reader.line_num
        kwargs: dict[str, object] = {}
        for name, cell in zip(header, row):
            if name == "ClientID":
                kwargs["client_id"] = cell.strip()
                continue
            spec = _STATUS_COLUMNS.get(name)
            if spec is None:
                continue
            field_name, kind = spec
            value = cell.strip()
            if value in _MISSING:
                kwargs[field_name] = None
            elif kind == "date":
                kwargs[field_name] = _parse_date(value, line)
            elif kind == "int":
                kwargs[field_name] = int(value)
            else:
                kwargs[field_name] = value
        if "client_id" not in kwargs or not kwargs["client_id"]:
            raise DatasetFormatError("ClientID must not be empty", line=line)
        rows.append(StatusRecord(**kwargs))  # type: ignore[arg-type]
    return rows


def split_by_id(records: Sequence[VisitRecord], n: int) -> list[list[VisitRecord]]:
    """Partition records into groups of n unique patients.

    Patient order follows first appearance in the input; every record
    of a patient lands in that patient's chunk, so detection over the
    concatenated chunks equals detection over the whole input. With m
    unique patients this yields ceil(m/n) chunks, the last holding the
    remainder.
    """
    if n < 1:
        raise InvalidParameterError(f"patients per chunk must be >= 1, got {n}")
    order: list[str] = []
    seen: set[str] = set()
    for rec in records:
        if rec.client_id not in seen:
            seen.add(rec.client_id)
            order.append(rec.client_id)
    chunk_of = {cid: i // n for i, cid in enumerate(order)}
    chunks: list[list[VisitRecord]] = [[] for _ in range(math.ceil(len(order) / n))]
    for rec in records:
        chunks[chunk_of[rec.client_id]].append(rec)
    return chunks


def split_by_time(
    records: Sequence[VisitRecord],
    t: float,
    strict_appendix: bool = False,
) -> list[list[VisitRecord]]:
    """Partition records into time chunks of width t days, stride t+1.

    Chunk i (1-based) keeps visits with
    min_date + (i-1)(t+1) <= visit_date <= min_date + (i-1)(t+1) + t,
    comparing integer day offsets against the real-valued bounds
    (fractional t is supported). By default empty chunks are skipped
    and emission continues until the chunk start passes the last visit;
    strict_appendix=True instead stops at the first empty chunk, for
    bit-faithful comparison against pipelines with that break-on-empty
    behavior, at the cost of silently dropping trailing data across any
    gap longer than t+1 days.
    """
    if not records:
        raise InvalidParameterError("cannot time-split an empty dataset")
    if t <= 0:
        raise InvalidParameterError(f"chunk span must be > 0, got {t}")
    ordinals = [rec.visit_date.toordinal() for rec in records]
    first = min(ordinals)
    last_offset = max(ordinals) - first

    chunks: list[list[VisitRecord]] = []
    i = 1
    while True:
        start = (i - 1) * (t + 1)
        if start > last_offset:
            break
        end = start + t
        chunk = [rec for rec, day in zip(records, ordinals) if start <= day - first <= end]
        if chunk:
            chunks.append(chunk)
        elif strict_appendix:
            break
        i += 1
    return chunks


def time_chunk_bounds(t: float, count: int) -> list[tuple[float, float]]:
    """Real-valued (start, end) day offsets from the earliest visit for the first chunks."""
    return [((i - 1) * (t + 1), (i - 1) * (t + 1) + t) for i in range(1, count + 1)]
