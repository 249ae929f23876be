"""Deterministic generator for the bundled 200-patient demo dataset.

Seven cohort groups define per-patient hospital and physician visit
counts, a visit-date span, and the diagnostic codes each stream
carries. Groups 1-4 carry both mental-health and substance-use codes
(the concurrent cohort), group 5 substance-use only, group 6
mental-health only, and group 7 neither; unrelated hypertension and
influenza codes ride along on whichever stream their frequency
matches.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from datetime import date, timedelta

from .errors import InvalidParameterError
from .models import VisitRecord, normalize_icd_codes

CodePlan = tuple[tuple[frozenset[str], int], ...]


@dataclass(frozen=True)
class CohortSpec:
    """One generator group: size, visit span, and per-stream code plans.

    Each plan entry is (code set, frequency); the frequency must equal
    the stream's visit count, i.e. planned codes co-occur on every
    visit of that stream.
    """

    group_id: int
    size: int
    span_start: date
    span_end: date
    hospital_visits: int
    physician_visits: int
    hospital_code_plan: CodePlan = ()
    physician_code_plan: CodePlan = ()

    def __post_init__(self):
        if self.size < 0:
            raise InvalidParameterError(f"group {self.group_id}: size must be >= 0")
        if self.span_start > self.span_end:
            raise InvalidParameterError(
                f"group {self.group_id}: span_start must not exceed span_end"
            )
        for stream, count, plan in (
            ("hospital", self.hospital_visits, self.hospital_code_plan),
            ("physician", self.physician_visits, self.physician_code_plan),
        ):
            for codes, freq in plan:
                if freq != count:
                    raise InvalidParameterError(
                        f"group {self.group_id}: {stream} code frequency {freq} "
                        f"does not match the stream's {count} visits"
                    )

    @property
    def span_days(self) -> int:
        return (self.span_end - self.span_start).days + 1

    def stream_codes(self, stream: str) -> frozenset[str]:
        plan = self.hospital_code_plan if stream == "hospital" else self.physician_code_plan
        merged: frozenset[str] = frozenset()
        for codes, _ in plan:
            merged |= codes
        return merged


def _plan(*entries: tuple[str, int]) -> CodePlan:
    return tuple((normalize_icd_codes(code), freq) for code, freq in entries)


def default_cohort_specs() -> list[CohortSpec]:
    """The seven built-in groups (200 patients, calendar year 2024)."""
    return [
        CohortSpec(1, 10, date(2024, 1, 1), date(2024, 1, 31), 1, 2,
                   hospital_code_plan=_plan(("F100", 1)),
                   physician_code_plan=_plan(("F060", 2))),
        CohortSpec(2, 20, date(2024, 2, 1), date(2024, 3, 31), 2, 4,
                   hospital_code_plan=_plan(("T4041", 2)),
                   physician_code_plan=_plan(("F063", 4), ("J10", 4))),
        CohortSpec(3, 30, date(2024, 4, 1), date(2024, 6, 30), 3, 6,
                   hospital_code_plan=_plan(("F120", 3), ("I10", 3)),
                   physician_code_plan=_plan(("F064", 6))),
        CohortSpec(4, 40, date(2024, 7, 1), date(2024, 12, 31), 6, 12,
                   hospital_code_plan=_plan(("F140", 6), ("I10", 6)),
                   physician_code_plan=_plan(("F067", 12), ("J10", 12))),
        CohortSpec(5, 25, date(2024, 11, 1), date(2024, 12, 31), 3, 6,
                   hospital_code_plan=_plan(("F100", 3)),
                   physician_code_plan=_plan(("J10", 6))),
        CohortSpec(6, 25, date(2024, 11, 1), date(2024, 12, 31), 2, 4,
                   hospital_code_plan=_plan(("I10", 2)),
                   physician_code_plan=_plan(("F060", 4))),
        CohortSpec(7, 50, date(2024, 11, 1), date(2024, 12, 31), 1, 2,
                   hospital_code_plan=_plan(("I10", 1)),
                   physician_code_plan=_plan(("J10", 2))),
    ]


def _deterministic_offsets(count: int, span_days: int) -> list[int]:
    # j-th of c visits sits at floor((j - 0.5) * D / c): evenly spread
    # over the span interior, never more than ceil(D/c) days apart.
    return [((2 * j - 1) * span_days) // (2 * count) for j in range(1, count + 1)]


def _uniform_offsets(count: int, span_days: int, rng: random.Random) -> list[int]:
    if count > span_days:
        raise InvalidParameterError(
            f"cannot place {count} distinct visit dates in a {span_days}-day span"
        )
    return sorted(rng.sample(range(span_days), count))


def generate_sample(
    specs: list[CohortSpec] | None = None,
    placement: str = "deterministic",
    seed: int = 0,
) -> list[VisitRecord]:
    """Generate visit records for the given cohort groups.

    Client ids are zero-padded decimal strings assigned sequentially
    across groups. ``placement`` is "deterministic" (evenly spread
    visit dates, the default, which pins the dataset's detection
    counts) or "uniform" (seeded draw of distinct dates per stream).
    Output rows are ordered client, then hospital visits, then
    physician visits, dates ascending.
    """
    if specs is None:
        specs = default_cohort_specs()
    if placement not in ("deterministic", "uniform"):
        raise InvalidParameterError(
            f"placement must be 'deterministic' or 'uniform', got {placement!r}"
        )
    total = sum(spec.size for spec in specs)
    width = max(3, len(str(total)))
    rng = random.Random(seed)

    records: list[VisitRecord] = []
    client_no = 0
    for spec in specs:
        streams = (
            ("hospital", spec.hospital_visits, spec.stream_codes("hospital")),
            ("physician", spec.physician_visits, spec.stream_codes("physician")),
        )
        for _ in range(spec.size):
            client_no += 1
            client_id = str(client_no).zfill(width)
            for stream, count, codes in streams:
                if count == 0:
                    continue
                if placement == "deterministic":
                    offsets = _deterministic_offsets(count, spec.span_days)
                else:
                    offsets = _uniform_offsets(count, spec.span_days, rng)
                for offset in offsets:
                    visit_date = spec.span_start + timedelta(days=offset)
                    records.append(
                        VisitRecord(
                            client_id=client_id,
                            visit_date=visit_date,
                            hospital_codes=codes if stream == "hospital" else frozenset(),
                            physician_codes=codes if stream == "physician" else frozenset(),
                        )
                    )
    return records
