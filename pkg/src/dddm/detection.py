"""Per-patient detection of mental-health, substance-use, and concurrent status.

All operations are pure functions over immutable inputs. A patient
qualifies for a status when at least n same-stream coded visits fall
within a t-day inclusive span; hospital and physician streams are
evaluated separately and joined by OR, never pooled. Concurrent status
requires both statuses inside one t_mhsu-day span: the single-span mode
assumes the whole dataset fits in one such span, the windowed mode
slides a t_mhsu-day window one day at a time across the data range.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from collections import defaultdict
from datetime import date, timedelta
from typing import Iterable, Sequence

from .errors import DddmError, InvalidParameterError, SpanExceedsLimitError
from .models import NO, YES, DddmParams, StatusRecord, VisitRecord, WindowPlan, normalize_icd_codes


def qualifying_window_exists(dates: Sequence[int], n: int, t: int) -> bool:
    """True iff some n of the given day offsets fit within a t-day span.

    ``dates`` must be sorted ascending; duplicates are allowed and count
    separately (multiple same-day visits are distinct visits). The span
    is inclusive, so t=0 accepts n visits on one day. Among sorted
    dates, the tightest n-element subset is always consecutive, so a
    linear scan over consecutive runs is exact.
    """
    if n < 1:
        raise InvalidParameterError(f"visit count must be >= 1, got {n}")
    if t < 0:
        raise InvalidParameterError(f"day span must be >= 0, got {t}")
    if len(dates) < n:
        return False
    return any(dates[i + n - 1] - dates[i] <= t for i in range(len(dates) - n + 1))


class _ClientVisits:
    """Sorted per-client visit dates, split by stream and code family."""

    __slots__ = ("mh_hospital", "mh_physician", "su_hospital", "su_physician")

    def __init__(self):
        self.mh_hospital: list[int] = []
        self.mh_physician: list[int] = []
        self.su_hospital: list[int] = []
        self.su_physician: list[int] = []

    def sort(self):
        for stream in (self.mh_hospital, self.mh_physician, self.su_hospital, self.su_physician):
            stream.sort()


def _index_by_client(
    records: Iterable[VisitRecord],
    icd_mh: frozenset[str] | None,
    icd_su: frozenset[str] | None,
) -> dict[str, _ClientVisits]:
    """Bucket matching visit dates (as ordinals) per client and stream.

    A visit counts once toward a stream no matter how many matching
    codes it carries; a visit carrying both family's codes counts in
    both families.
    """
    by_client: dict[str, _ClientVisits] = defaultdict(_ClientVisits)
    for rec in records:
        bucket = by_client[rec.client_id]
        day = rec.visit_date.toordinal()
        if icd_mh is not None:
            if rec.hospital_codes & icd_mh:
                bucket.mh_hospital.append(day)
            if rec.physician_codes & icd_mh:
                bucket.mh_physician.append(day)
        if icd_su is not None:
            if rec.hospital_codes & icd_su:
                bucket.su_hospital.append(day)
            if rec.physician_codes & icd_su:
                bucket.su_physician.append(day)
    for bucket in by_client.values():
        bucket.sort()
    return by_client


def _date_bounds(hospital: Sequence[int], physician: Sequence[int]) -> tuple[date | None, date | None]:
    """Earliest/latest over both matching streams, None when no visit matches."""
    lows = [s[0] for s in (hospital, physician) if s]
    highs = [s[-1] for s in (hospital, physician) if s]
    if not lows:
        return None, None
    return date.fromordinal(min(lows)), date.fromordinal(max(highs))


def _family_status(
    hospital: Sequence[int], physician: Sequence[int], n_h: int, n_p: int, t: int
) -> tuple[date | None, date | None, str]:
    earliest, latest = _date_bounds(hospital, physician)
    qualified = qualifying_window_exists(hospital, n_h, t) or qualifying_window_exists(
        physician, n_p, t
    )
    return earliest, latest, (YES if qualified else NO)


def mh_status(
    records: Iterable[VisitRecord],
    n_mhh: int = 1,
    n_mhp: int = 1,
    t_mh: int = 60,
    icd_mh: Iterable[str] = (),
) -> list[StatusRecord]:
    """Mental-health status per patient, one row per unique client.

    A client is YES when n_mhh hospital visits or n_mhp physician
    visits carrying a code from icd_mh fall within t_mh days. Earliest
    and latest dates cover all matching-coded visits regardless of
    status. Output is sorted by client_id.
    """
    codes = normalize_icd_codes(icd_mh)
    if not codes:
        raise InvalidParameterError("icd_mh must not be empty")
    if n_mhh < 1 or n_mhp < 1:
        raise InvalidParameterError("visit counts must be >= 1")
    if t_mh < 0:
        raise InvalidParameterError("t_mh must be >= 0")
    by_client = _index_by_client(records, codes, None)
    rows = []
    for client_id in sorted(by_client):
        visits = by_client[client_id]
        earliest, latest, status = _family_status(
            visits.mh_hospital, visits.mh_physician, n_mhh, n_mhp, t_mh
        )
        rows.append(
            StatusRecord(
                client_id=client_id,
                mh_earliest=earliest,
                mh_latest=latest,
                mh_status=status,
            )
        )
    return rows


def su_status(
    records: Iterable[VisitRecord],
    n_suh: int = 1,
    n_sup: int = 1,
    t_su: int = 60,
    icd_su: Iterable[str] = (),
) -> list[StatusRecord]:
    """Substance-use status per patient; same contract as mh_status."""
    codes = normalize_icd_codes(icd_su)
    if not codes:
        raise InvalidParameterError("icd_su must not be empty")
    if n_suh < 1 or n_sup < 1:
        raise InvalidParameterError("visit counts must be >= 1")
    if t_su < 0:
        raise InvalidParameterError("t_su must be >= 0")
    by_client = _index_by_client(records, None, codes)
    rows = []
    for client_id in sorted(by_client):
        visits = by_client[client_id]
        earliest, latest, status = _family_status(
            visits.su_hospital, visits.su_physician, n_suh, n_sup, t_su
        )
        rows.append(
            StatusRecord(
                client_id=client_id,
                su_earliest=earliest,
                su_latest=latest,
                su_status=status,
            )
        )
    return rows


def data_span_days(records: Iterable[VisitRecord]) -> int:
    """Inclusive day count between the earliest and latest visit dates."""
    ordinals = [rec.visit_date.toordinal() for rec in records]
    if not ordinals:
        return 0
    return max(ordinals) - min(ordinals) + 1


def mhsu_status_basic(
    records: Sequence[VisitRecord],
    params: DddmParams,
    force: bool = False,
) -> list[StatusRecord]:
    """Concurrent status assuming the data fits inside one t_mhsu span.

    With the whole dataset inside one span, any MH qualification and
    any SU qualification are automatically concurrent, so the row
    status is simply the conjunction of the two. Inputs spanning more
    than t_mhsu days are rejected unless force=True; the windowed
    variant handles them properly.
    """
    span = data_span_days(records)
    if span > params.t_mhsu and not force:
        raise SpanExceedsLimitError(span, params.t_mhsu)
    mh_rows = mh_status(records, params.n_mhh, params.n_mhp, params.t_mh, params.icd_mh)
    su_rows = su_status(records, params.n_suh, params.n_sup, params.t_su, params.icd_su)
    rows = []
    for mh, su in zip(mh_rows, su_rows):
        rows.append(
            StatusRecord(
                client_id=mh.client_id,
                mh_earliest=mh.mh_earliest,
                mh_latest=mh.mh_latest,
                mh_status=mh.mh_status,
                su_earliest=su.su_earliest,
                su_latest=su.su_latest,
                su_status=su.su_status,
                mhsu_status=YES if (mh.mh_status == YES and su.su_status == YES) else NO,
            )
        )
    return rows


def plan_windows(min_date: date, max_date: date, t_mhsu: int) -> WindowPlan:
    """Sliding evaluation windows covering [min_date, max_date].

    k = span_days - t_mhsu + 1 windows of exactly t_mhsu days each,
    starting one day apart from min_date; clamped to a single window
    when the range already fits within t_mhsu days.
    """
    if min_date > max_date:
        raise InvalidParameterError("min_date must not exceed max_date")
    if t_mhsu < 1:
        raise InvalidParameterError(f"t_mhsu must be >= 1, got {t_mhsu}")
    span_days = (max_date - min_date).days + 1
    count = max(1, span_days - t_mhsu + 1)
    windows = tuple(
        (
            min_date + timedelta(days=i),
            min_date + timedelta(days=i + t_mhsu - 1),
        )
        for i in range(count)
    )
    return WindowPlan(window_count=count, windows=windows)


def mhsu_status_broad(
    records: Sequence[VisitRecord],
    params: DddmParams,
) -> list[StatusRecord]:
    """Concurrent status evaluated over sliding t_mhsu-day windows.

    Every client appears once per window (k windows x n clients rows),
    with statuses computed on the visits dated inside that window;
    clients with no matching visits in a window get NO with absent
    dates. Rows are ordered by window index, then client_id.
    """
    if not records:
        raise DddmError("windowed detection requires a non-empty dataset")
    ordinals = [rec.visit_date.toordinal() for rec in records]
    plan = plan_windows(
        date.fromordinal(min(ordinals)), date.fromordinal(max(ordinals)), params.t_mhsu
    )
    by_client = _index_by_client(records, params.icd_mh, params.icd_su)
    roster = sorted({rec.client_id for rec in records})

    rows = []
    for index, (win_start, win_end) in enumerate(plan.windows, start=1):
        lo = win_start.toordinal()
        hi = win_end.toordinal()
        for client_id in roster:
            visits = by_client[client_id]
            mh_h = _slice(visits.mh_hospital, lo, hi)
            mh_p = _slice(visits.mh_physician, lo, hi)
            su_h = _slice(visits.su_hospital, lo, hi)
            su_p = _slice(visits.su_physician, lo, hi)
            mh_earliest, mh_latest, mh = _family_status(
                mh_h, mh_p, params.n_mhh, params.n_mhp, params.t_mh
            )
            su_earliest, su_latest, su = _family_status(
                su_h, su_p, params.n_suh, params.n_sup, params.t_su
            )
            rows.append(
                StatusRecord(
                    client_id=client_id,
                    mh_earliest=mh_earliest,
                    mh_latest=mh_latest,
                    mh_status=mh,
                    su_earliest=su_earliest,
                    su_latest=su_latest,
                    su_status=su,
                    mhsu_status=YES if (mh == YES and su == YES) else NO,
                    window_index=index,
                )
            )
    return rows


def _slice(stream: list[int], lo: int, hi: int) -> list[int]:
    return stream[bisect_left(stream, lo) : bisect_right(stream, hi)]


def aggregate_windows(broad_rows: Iterable[StatusRecord]) -> list[StatusRecord]:
    """Collapse windowed rows to one row per client.

    Each status becomes YES when it was YES in at least one window;
    dates are the min/max over windows where present. Downstream counts
    are per patient, not per window-row.
    """
    by_client: dict[str, list[StatusRecord]] = defaultdict(list)
    for row in broad_rows:
        by_client[row.client_id].append(row)
    rows = []
    for client_id in sorted(by_client):
        group = by_client[client_id]
        rows.append(
            StatusRecord(
                client_id=client_id,
                mh_earliest=_opt_min(r.mh_earliest for r in group),
                mh_latest=_opt_max(r.mh_latest for r in group),
                mh_status=YES if any(r.mh_status == YES for r in group) else NO,
                su_earliest=_opt_min(r.su_earliest for r in group),
                su_latest=_opt_max(r.su_latest for r in group),
                su_status=YES if any(r.su_status == YES for r in group) else NO,
                mhsu_status=YES if any(r.mhsu_status == YES for r in group) else NO,
            )
        )
    return rows


def _opt_min(values: Iterable[date | None]) -> date | None:
    present = [v for v in values if v is not None]
    return min(present) if present else None


def _opt_max(values: Iterable[date | None]) -> date | None:
    present = [v for v in values if v is not None]
    return max(present) if present else None
