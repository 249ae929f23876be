"""Summary statistics, parameter sweeps, and temporal trend analysis.

Sweeps re-run detection over a parameter grid and record per-point YES
counts; every point is reproducible by an isolated detection run with
the same parameters. Temporal analysis tiles the data's date range
with calendar buckets (e.g. months over a year) and reports per-bucket
counts and per-active-patient rates.
"""

from __future__ import annotations

import warnings
from dataclasses import replace
from datetime import date, timedelta
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from typing import Iterable, Sequence

from .detection import aggregate_windows, mhsu_status_basic, mhsu_status_broad
from .errors import DddmError, InvalidParameterError
from .models import (
    YES,
    DddmParams,
    StatusRecord,
    SummaryStats,
    SweepPoint,
    SweepSeries,
    TemporalBucket,
    TemporalSpec,
    VisitRecord,
)

DEFAULT_WITHIN_SPAN_GRID = tuple(range(0, 57, 7))  # 0, 7, ..., 56 days
DEFAULT_VISIT_COUNT_GRID = tuple(range(1, 9))
DEFAULT_CONCURRENT_SPAN_GRID = tuple(31 * k for k in range(1, 13))
DEFAULT_CONCURRENT_WITHIN_SPANS = (14, 21, 28)


def format_proportion(value: Fraction, digits: int = 3) -> str:
    """Render an exact proportion with fixed decimals, rounding half up."""
    quantum = Decimal(1).scaleb(-digits)
    result = (Decimal(value.numerator) / Decimal(value.denominator)).quantize(
        quantum, rounding=ROUND_HALF_UP
    )
    return f"{result:.{digits}f}"


def summarize(status_table: Sequence[StatusRecord]) -> SummaryStats:
    """YES counts and proportions over a one-row-per-patient status table."""
    if not status_table:
        warnings.warn("summarizing an empty status table; proportions render as 0.000")
    return SummaryStats(
        row_count=len(status_table),
        mh_count=sum(1 for r in status_table if r.mh_status == YES),
        su_count=sum(1 for r in status_table if r.su_status == YES),
        mhsu_count=sum(1 for r in status_table if r.mhsu_status == YES),
    )


def summary_to_text(stats: SummaryStats) -> str:
    """Two-line fixed-width report: counts and 3-decimal proportions."""
    header = (
        "MH_Count MH_Proportion SU_Count SU_Proportion MHSU_Count MHSU_Proportion"
    )
    values = " ".join(
        str(v)
        for v in (
            stats.mh_count,
            format_proportion(stats.mh_proportion),
            stats.su_count,
            format_proportion(stats.su_proportion),
            stats.mhsu_count,
            format_proportion(stats.mhsu_proportion),
        )
    )
    return f"{header}\n{values}"


def summary_to_dict(stats: SummaryStats) -> dict:
    return {
        "row_count": stats.row_count,
        "mh_count": stats.mh_count,
        "mh_proportion": format_proportion(stats.mh_proportion),
        "su_count": stats.su_count,
        "su_proportion": format_proportion(stats.su_proportion),
        "mhsu_count": stats.mhsu_count,
        "mhsu_proportion": format_proportion(stats.mhsu_proportion),
    }


def _grid(values: Iterable[float] | None, default: tuple, minimum: float) -> list:
    if values is None:
        grid = list(default)
    else:
        grid = sorted(set(values))
    if not grid:
        raise InvalidParameterError("sweep grid must not be empty")
    if grid[0] < minimum:
        raise InvalidParameterError(f"sweep values must be >= {minimum}, got {grid[0]}")
    return grid


def _counts(rows: Sequence[StatusRecord]) -> tuple[int, int, int]:
    return (
        sum(1 for r in rows if r.mh_status == YES),
        sum(1 for r in rows if r.su_status == YES),
        sum(1 for r in rows if r.mhsu_status == YES),
    )


def sweep_within_span(
    records: Sequence[VisitRecord],
    params: DddmParams,
    x_values: Iterable[int] | None = None,
) -> SweepSeries:
    """Vary the within-status day span t_mh = t_su = x; counts per point."""
    grid = _grid(x_values, DEFAULT_WITHIN_SPAN_GRID, 0)
    points = []
    for x in grid:
        rows = mhsu_status_basic(records, replace(params, t_mh=int(x), t_su=int(x)))
        mh, su, mhsu = _counts(rows)
        points.append(SweepPoint(x=x, mh_count=mh, su_count=su, mhsu_count=mhsu))
    return SweepSeries(kind="within-span", label="t_mh=t_su=x", points=tuple(points))


def sweep_visit_counts(
    records: Sequence[VisitRecord],
    params: DddmParams,
    x_values: Iterable[int] | None = None,
    ratio: int = 2,
) -> SweepSeries:
    """Vary required visits: hospital counts x, physician counts ratio*x."""
    if ratio < 1:
        raise InvalidParameterError(f"hospital-to-physician ratio must be >= 1, got {ratio}")
    grid = _grid(x_values, DEFAULT_VISIT_COUNT_GRID, 1)
    points = []
    for x in grid:
        x = int(x)
        rows = mhsu_status_basic(
            records,
            replace(params, n_mhh=x, n_suh=x, n_mhp=ratio * x, n_sup=ratio * x),
        )
        mh, su, mhsu = _counts(rows)
        points.append(SweepPoint(x=x, mh_count=mh, su_count=su, mhsu_count=mhsu))
    return SweepSeries(kind="visit-count", label=f"ratio 1:{ratio}", points=tuple(points))


def sweep_concurrent_span(
    records: Sequence[VisitRecord],
    params: DddmParams,
    within_spans: Iterable[int] | None = None,
    t_mhsu_values: Iterable[int] | None = None,
) -> list[SweepSeries]:
    """Vary the concurrent span t_mhsu, one series per within-status span.

    Each point runs windowed detection and counts patients concurrent
    in at least one window (patient-level aggregation, not window
    rows).
    """
    spans = _grid(within_spans, DEFAULT_CONCURRENT_WITHIN_SPANS, 0)
    grid = _grid(t_mhsu_values, DEFAULT_CONCURRENT_SPAN_GRID, 1)
    series = []
    for span in spans:
        span = int(span)
        points = []
        for y in grid:
            rows = aggregate_windows(
                mhsu_status_broad(
                    records, replace(params, t_mh=span, t_su=span, t_mhsu=int(y))
                )
            )
            points.append(
                SweepPoint(x=y, mhsu_count=sum(1 for r in rows if r.mhsu_status == YES))
            )
        series.append(
            SweepSeries(kind="concurrent-span", label=f"t_mh=t_su={span}", points=tuple(points))
        )
    return series


def sweep_to_csv(series: SweepSeries) -> str:
    """Series as CSV with columns x, mh, su, mhsu (blank when untracked)."""
    lines = ["x,mh,su,mhsu"]
    for p in series.points:
        mh = "" if p.mh_count is None else str(p.mh_count)
        su = "" if p.su_count is None else str(p.su_count)
        lines.append(f"{_num(p.x)},{mh},{su},{p.mhsu_count}")
    return "\n".join(lines) + "\n"


def sweep_to_json(series_list: Sequence[SweepSeries]) -> dict:
    return {
        "series": [
            {
                "kind": s.kind,
                "label": s.label,
                "points": [
                    {
                        "x": p.x,
                        "mh": p.mh_count,
                        "su": p.su_count,
                        "mhsu": p.mhsu_count,
                    }
                    for p in s.points
                ],
            }
            for s in series_list
        ]
    }


def _num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else str(x)


# Calendar bucketing ---------------------------------------------------------


def _bucket_start(d: date, unit: str) -> date:
    if unit == "day":
        return d
    if unit == "week":
        return d - timedelta(days=d.weekday())  # ISO week, Monday start
    if unit == "month":
        return d.replace(day=1)
    if unit == "quarter":
        return d.replace(month=3 * ((d.month - 1) // 3) + 1, day=1)
    if unit == "year":
        return d.replace(month=1, day=1)
    raise InvalidParameterError(f"unsupported unit {unit!r}")


def _next_bucket_start(start: date, unit: str) -> date:
    if unit == "day":
        return start + timedelta(days=1)
    if unit == "week":
        return start + timedelta(days=7)
    if unit == "month":
        return (start.replace(day=28) + timedelta(days=4)).replace(day=1)
    if unit == "quarter":
        year, month = start.year, start.month + 3
        if month > 12:
            year, month = year + 1, month - 12
        return date(year, month, 1)
    if unit == "year":
        return date(start.year + 1, 1, 1)
    raise InvalidParameterError(f"unsupported unit {unit!r}")


def _bucket_label(start: date, unit: str) -> str:
    if unit == "day":
        return start.isoformat()
    if unit == "week":
        iso = start.isocalendar()
        return f"{iso[0]}-W{iso[1]:02d}"
    if unit == "month":
        return f"{start.year}-{start.month:02d}"
    if unit == "quarter":
        return f"{start.year}-Q{(start.month - 1) // 3 + 1}"
    return str(start.year)


def temporal_analysis(
    records: Sequence[VisitRecord],
    params: DddmParams,
    spec: TemporalSpec,
    force: bool = False,
) -> list[TemporalBucket]:
    """Per-bucket detection counts and rates across the data's date range.

    Buckets are calendar-aligned units (every unit from the one holding
    the earliest visit through the one holding the latest, empty ones
    included). Rates divide by the unique patients with at least one
    visit in the bucket. Buckets wider than t_mhsu violate the
    single-span assumption and are rejected unless force=True.
    """
    if not records:
        raise DddmError("temporal analysis requires a non-empty dataset")
    dates = [rec.visit_date for rec in records]
    start = _bucket_start(min(dates), spec.unit)
    last = max(dates)

    buckets: list[TemporalBucket] = []
    while start <= last:
        next_start = _next_bucket_start(start, spec.unit)
        end = next_start - timedelta(days=1)
        width = (end - start).days + 1
        if width > params.t_mhsu and not force:
            raise InvalidParameterError(
                f"bucket {_bucket_label(start, spec.unit)} spans {width} days, more than "
                f"t_mhsu={params.t_mhsu}; widen t_mhsu, choose a finer unit, or pass force=True"
            )
        subset = [rec for rec in records if start <= rec.visit_date <= end]
        if subset:
            rows = mhsu_status_basic(subset, params, force=force)
            mh, su, mhsu = _counts(rows)
            active = len(rows)
        else:
            warnings.warn(f"bucket {_bucket_label(start, spec.unit)} has no visits")
            mh = su = mhsu = 0
            active = 0
        buckets.append(
            TemporalBucket(
                label=_bucket_label(start, spec.unit),
                start=start,
                end=end,
                active_clients=active,
                mh_count=mh,
                su_count=su,
                mhsu_count=mhsu,
            )
        )
        start = next_start
    return buckets


def temporal_to_csv(buckets: Sequence[TemporalBucket]) -> str:
    lines = ["bucket,start,end,active_clients,mh,su,mhsu,mh_rate,su_rate,mhsu_rate"]
    for b in buckets:
        lines.append(
            ",".join(
                [
                    b.label,
                    b.start.isoformat(),
                    b.end.isoformat(),
                    str(b.active_clients),
                    str(b.mh_count),
                    str(b.su_count),
                    str(b.mhsu_count),
                    format_proportion(b.mh_rate),
                    format_proportion(b.su_rate),
                    format_proportion(b.mhsu_rate),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def temporal_to_json(buckets: Sequence[TemporalBucket], spec: TemporalSpec) -> dict:
    return {
        "unit": spec.unit,
        "span": spec.span,
        "statistic": spec.statistic,
        "buckets": [
            {
                "bucket": b.label,
                "start": b.start.isoformat(),
                "end": b.end.isoformat(),
                "active_clients": b.active_clients,
                "mh": b.mh_count,
                "su": b.su_count,
                "mhsu": b.mhsu_count,
                "mh_rate": format_proportion(b.mh_rate),
                "su_rate": format_proportion(b.su_rate),
                "mhsu_rate": format_proportion(b.mhsu_rate),
            }
            for b in buckets
        ],
    }
