"""Domain types shared across the package.

Diagnostic codes are plain strings normalized to uppercase, 3-5
alphanumeric characters with no decimal point. Statuses are the literal
strings "YES"/"NO" so records serialize without translation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import date
from fractions import Fraction
from typing import Iterable

from .errors import InvalidParameterError

YES = "YES"
NO = "NO"

_ICD_RE = re.compile(r"^[A-Z0-9]{3,5}$")

# Parameter defaults follow the package's worked examples: any single
# hospital or physician visit qualifies, two-month within-status span,
# one-year concurrent span, and the bundled mental-health (psychotic,
# mood, anxiety, neurocognitive) and substance-use (alcohol, fentanyl,
# cannabis, cocaine) code lists.
DEFAULT_MH_CODES = frozenset({"F060", "F063", "F064", "F067"})
DEFAULT_SU_CODES = frozenset({"F100", "T4041", "F120", "F140"})


def normalize_icd_code(raw: str) -> str:
    """Uppercase and trim a diagnostic code, validating its shape.

    Raises InvalidParameterError unless the result is 3-5 characters of
    A-Z/0-9 (in particular: no decimal point).
    """
    code = raw.strip().upper()
    if not _ICD_RE.match(code):
        raise InvalidParameterError(
            f"invalid diagnostic code {raw!r}: expected 3-5 alphanumeric "
            "characters without a decimal point"
        )
    return code


def normalize_icd_codes(raw: Iterable[str] | str) -> frozenset[str]:
    """Normalize an iterable of diagnostic codes into a frozenset."""
    if isinstance(raw, str):
        raw = [raw]
    return frozenset(normalize_icd_code(c) for c in raw)


@dataclass(frozen=True)
class VisitRecord:
    """One patient visit with hospital- and physician-assigned codes."""

    client_id: str
    visit_date: date
    hospital_codes: frozenset[str] = frozenset()
    physician_codes: frozenset[str] = frozenset()


@dataclass(frozen=True)
class DddmParams:
    """The seven detection parameters plus the two diagnostic code sets.

    Counts are minimum visits per stream (hospital / physician); spans
    are maximum day gaps, inclusive, so t=0 means same-day.
    """

    n_mhh: int = 1
    n_mhp: int = 1
    n_suh: int = 1
    n_sup: int = 1
    t_mh: int = 60
    t_su: int = 60
    t_mhsu: int = 365
    icd_mh: frozenset[str] = DEFAULT_MH_CODES
    icd_su: frozenset[str] = DEFAULT_SU_CODES

    def __post_init__(self):
        for name in ("n_mhh", "n_mhp", "n_suh", "n_sup"):
            if getattr(self, name) < 1:
                raise InvalidParameterError(f"{name} must be >= 1, got {getattr(self, name)}")
        for name in ("t_mh", "t_su"):
            if getattr(self, name) < 0:
                raise InvalidParameterError(f"{name} must be >= 0, got {getattr(self, name)}")
        if self.t_mhsu < 1:
            raise InvalidParameterError(f"t_mhsu must be >= 1, got {self.t_mhsu}")
        object.__setattr__(self, "icd_mh", normalize_icd_codes(self.icd_mh))
        object.__setattr__(self, "icd_su", normalize_icd_codes(self.icd_su))
        if not self.icd_mh:
            raise InvalidParameterError("icd_mh must not be empty")
        if not self.icd_su:
            raise InvalidParameterError("icd_su must not be empty")

    def overlap_warning(self) -> str | None:
        """Overlapping code sets are permitted but usually a mistake."""
        shared = self.icd_mh & self.icd_su
        if shared:
            return (
                "mental-health and substance-use code sets overlap: "
                + ", ".join(sorted(shared))
            )
        return None


@dataclass(frozen=True)
class StatusRecord:
    """Per-patient detection output row.

    Fields for a status family are None when that family was not
    evaluated (e.g. a substance-use-only run leaves the mh_* fields
    unset). Date fields are populated whenever the patient has at least
    one matching-coded visit in the evaluated scope, even if the
    count/span criteria fail and the status is NO.
    """

    client_id: str
    mh_earliest: date | None = None
    mh_latest: date | None = None
    mh_status: str | None = None
    su_earliest: date | None = None
    su_latest: date | None = None
    su_status: str | None = None
    mhsu_status: str | None = None
    window_index: int | None = None


@dataclass(frozen=True)
class WindowPlan:
    """The k sliding evaluation windows of the windowed detection mode.

    Windows are inclusive date intervals, each spanning exactly t_mhsu
    days; consecutive windows start one day apart.
    """

    window_count: int
    windows: tuple[tuple[date, date], ...]


@dataclass(frozen=True)
class SummaryStats:
    """YES counts and exact proportions over a status table."""

    row_count: int
    mh_count: int
    su_count: int
    mhsu_count: int

    def _proportion(self, count: int) -> Fraction:
        if self.row_count == 0:
            return Fraction(0)
        return Fraction(count, self.row_count)

    @property
    def mh_proportion(self) -> Fraction:
        return self._proportion(self.mh_count)

    @property
    def su_proportion(self) -> Fraction:
        return self._proportion(self.su_count)

    @property
    def mhsu_proportion(self) -> Fraction:
        return self._proportion(self.mhsu_count)


@dataclass(frozen=True)
class SweepPoint:
    """One grid point of a parameter sweep.

    mh_count/su_count are None for sweeps that track the concurrent
    count only.
    """

    x: float
    mhsu_count: int
    mh_count: int | None = None
    su_count: int | None = None


@dataclass(frozen=True)
class SweepSeries:
    """An ordered series of sweep points under one parameter regime."""

    kind: str  # "within-span" | "visit-count" | "concurrent-span"
    label: str
    points: tuple[SweepPoint, ...]


TEMPORAL_UNITS = ("day", "week", "month", "quarter", "year")
TEMPORAL_SPANS = ("week", "month", "quarter", "year", "decade")
_GRANULARITY = {"day": 0, "week": 1, "month": 2, "quarter": 3, "year": 4, "decade": 5}


@dataclass(frozen=True)
class TemporalSpec:
    """Bucketing scheme for trend analysis, e.g. months over a year."""

    unit: str = "month"
    span: str = "year"
    statistic: str = "frequency"  # "frequency" | "rate"

    def __post_init__(self):
        if self.unit not in TEMPORAL_UNITS:
            raise InvalidParameterError(
                f"unit must be one of {', '.join(TEMPORAL_UNITS)}, got {self.unit!r}"
            )
        if self.span not in TEMPORAL_SPANS:
            raise InvalidParameterError(
                f"span must be one of {', '.join(TEMPORAL_SPANS)}, got {self.span!r}"
            )
        if _GRANULARITY[self.unit] >= _GRANULARITY[self.span]:
            raise InvalidParameterError(
                f"unit {self.unit!r} must subdivide span {self.span!r}"
            )
        if self.statistic not in ("frequency", "rate"):
            raise InvalidParameterError(
                f"statistic must be 'frequency' or 'rate', got {self.statistic!r}"
            )


@dataclass(frozen=True)
class TemporalBucket:
    """Counts and rates for one calendar bucket.

    Rates are per active patient: count / unique clients with at least
    one visit inside the bucket.
    """

    label: str
    start: date
    end: date
    active_clients: int
    mh_count: int
    su_count: int
    mhsu_count: int

    def _rate(self, count: int) -> Fraction:
        if self.active_clients == 0:
            return Fraction(0)
        return Fraction(count, self.active_clients)

    @property
    def mh_rate(self) -> Fraction:
        return self._rate(self.mh_count)

    @property
    def su_rate(self) -> Fraction:
        return self._rate(self.su_count)

    @property
    def mhsu_rate(self) -> Fraction:
        return self._rate(self.mhsu_count)
