"""Cohort detection over administrative visit records.

Detects per-patient mental-health, substance-use, and concurrent
status from visit counts and time spans, with a bundled synthetic
dataset generator, dataset splitters, parameter-sweep and temporal
analytics, a CLI, and a local HTTP API.
"""

from .analytics import (
    summarize,
    summary_to_text,
    sweep_concurrent_span,
    sweep_visit_counts,
    sweep_within_span,
    temporal_analysis,
)
from .dataio import (
    parse_dataset,
    read_status_table,
    split_by_id,
    split_by_time,
    write_dataset,
    write_status_table,
)
from .detection import (
    aggregate_windows,
    mh_status,
    mhsu_status_basic,
    mhsu_status_broad,
    plan_windows,
    qualifying_window_exists,
    su_status,
)
from .errors import (
    DatasetFormatError,
    DddmError,
    InvalidParameterError,
    SpanExceedsLimitError,
)
from .models import (
    NO,
    YES,
    DddmParams,
    StatusRecord,
    SummaryStats,
    SweepPoint,
    SweepSeries,
    TemporalBucket,
    TemporalSpec,
    VisitRecord,
    WindowPlan,
)
from .simgen import CohortSpec, default_cohort_specs, generate_sample

__version__ = "0.1.0"

__all__ = [
    "CohortSpec",
    "DatasetFormatError",
    "DddmError",
    "DddmParams",
    "InvalidParameterError",
    "NO",
    "SpanExceedsLimitError",
    "StatusRecord",
    "SummaryStats",
    "SweepPoint",
    "SweepSeries",
    "TemporalBucket",
    "TemporalSpec",
    "VisitRecord",
    "WindowPlan",
    "YES",
    "aggregate_windows",
    "default_cohort_specs",
    "generate_sample",
    "mh_status",
    "mhsu_status_basic",
    "mhsu_status_broad",
    "parse_dataset",
    "plan_windows",
    "qualifying_window_exists",
    "read_status_table",
    "split_by_id",
    "split_by_time",
    "su_status",
    "summarize",
    "summary_to_text",
    "sweep_concurrent_span",
    "sweep_visit_counts",
    "sweep_within_span",
    "temporal_analysis",
    "write_dataset",
    "write_status_table",
]
