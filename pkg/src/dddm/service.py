"""Local HTTP/JSON API for dataset management, detection, sweeps, and trends.

Datasets are parsed once at upload, stored immutably in memory (write
once, read many), and optionally spilled to a directory so a restarted
service finds them again. All computation is synchronous and shares
the library code paths with the CLI, so identical parameters produce
identical results.
"""

from __future__ import annotations

import secrets
import time
from concurrent.futures import ThreadPoolExecutor
from concurrent.futures import TimeoutError as FutureTimeoutError
from dataclasses import dataclass
from datetime import date, datetime, timezone
from pathlib import Path
from typing import Literal

from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field, field_validator

from . import analytics, detection
from .dataio import dataset_to_csv, parse_dataset
from .errors import DddmError
from .models import DddmParams, StatusRecord, TemporalSpec, VisitRecord, normalize_icd_code

DEFAULT_PAGE_SIZE = 1000


@dataclass(frozen=True)
class ServiceConfig:
    max_upload_bytes: int = 50 * 1024 * 1024
    spill_dir: Path | None = None
    cors_origins: tuple[str, ...] = ("*",)
    compute_timeout_s: float = 120.0
    ui_dir: Path | None = None


@dataclass(frozen=True)
class StoredDataset:
    id: str
    records: tuple[VisitRecord, ...]
    created_at: str
    warnings: tuple[str, ...] = ()

    @property
    def row_count(self) -> int:
        return len(self.records)

    @property
    def client_count(self) -> int:
        return len({r.client_id for r in self.records})

    def date_range(self) -> tuple[date | None, date | None]:
        if not self.records:
            return None, None
        dates = [r.visit_date for r in self.records]
        return min(dates), max(dates)

    def metadata(self) -> dict:
        lo, hi = self.date_range()
        return {
            "id": self.id,
            "row_count": self.row_count,
            "client_count": self.client_count,
            "min_date": lo.isoformat() if lo else None,
            "max_date": hi.isoformat() if hi else None,
            "created_at": self.created_at,
            "warnings": list(self.warnings),
        }


class DetectParamsModel(BaseModel):
    n_mhh: int = Field(1, ge=1)
    n_mhp: int = Field(1, ge=1)
    n_suh: int = Field(1, ge=1)
    n_sup: int = Field(1, ge=1)
    t_mh: int = Field(60, ge=0)
    t_su: int = Field(60, ge=0)
    t_mhsu: int = Field(365, ge=1)
    icd_mh: list[str] = Field(default=["F060", "F063", "F064", "F067"], min_length=1)
    icd_su: list[str] = Field(default=["F100", "T4041", "F120", "F140"], min_length=1)
    force: bool = False

    @field_validator("icd_mh", "icd_su")
    @classmethod
    def _valid_codes(cls, value: list[str]) -> list[str]:
        try:
            return [normalize_icd_code(code) for code in value]
        except DddmError as exc:
            raise ValueError(str(exc))

    def to_params(self) -> DddmParams:
        return DddmParams(
            n_mhh=self.n_mhh, n_mhp=self.n_mhp, n_suh=self.n_suh, n_sup=self.n_sup,
            t_mh=self.t_mh, t_su=self.t_su, t_mhsu=self.t_mhsu,
            icd_mh=frozenset(self.icd_mh), icd_su=frozenset(self.icd_su),
        )


class SimulateRequest(BaseModel):
    placement: Literal["deterministic", "uniform"] = "deterministic"
    seed: int = 0


class DetectRequest(BaseModel):
    dataset_id: str
    mode: Literal["mh", "su", "basic", "broad"] = "basic"
    params: DetectParamsModel = Field(default_factory=DetectParamsModel)
    aggregate: bool = False  # broad mode: return per-patient rows instead of window rows
    offset: int = Field(0, ge=0)
    limit: int = Field(DEFAULT_PAGE_SIZE, ge=1, le=DEFAULT_PAGE_SIZE)


class SweepRequest(BaseModel):
    dataset_id: str
    kind: Literal["within-span", "visit-count", "concurrent-span"]
    grid: list[int] | None = None
    ratio: int = Field(2, ge=1)
    within_spans: list[int] | None = None
    params: DetectParamsModel = Field(default_factory=DetectParamsModel)


class TemporalRequest(BaseModel):
    dataset_id: str
    unit: Literal["day", "week", "month", "quarter", "year"] = "month"
    span: Literal["week", "month", "quarter", "year", "decade"] = "year"
    statistic: Literal["frequency", "rate"] = "frequency"
    params: DetectParamsModel = Field(default_factory=DetectParamsModel)


def _row_to_json(row: StatusRecord) -> dict:
    return {
        "client_id": row.client_id,
        "mh_earliest": row.mh_earliest.isoformat() if row.mh_earliest else None,
        "mh_latest": row.mh_latest.isoformat() if row.mh_latest else None,
        "mh_status": row.mh_status,
        "su_earliest": row.su_earliest.isoformat() if row.su_earliest else None,
        "su_latest": row.su_latest.isoformat() if row.su_latest else None,
        "su_status": row.su_status,
        "mhsu_status": row.mhsu_status,
        "window": row.window_index,
    }


class DatasetStore:
    """Write-once in-memory dataset table with optional disk spill."""

    def __init__(self, spill_dir: Path | None = None):
        self._datasets: dict[str, StoredDataset] = {}
        self._spill_dir = spill_dir
        if spill_dir is not None:
            spill_dir.mkdir(parents=True, exist_ok=True)
            self._reload()

    def _reload(self) -> None:
        assert self._spill_dir is not None
        for path in sorted(self._spill_dir.glob("*.csv")):
            try:
                records, report = parse_dataset(path.read_text(encoding="utf-8"))
            except DddmError:
                continue
            self._datasets[path.stem] = StoredDataset(
                id=path.stem,
                records=tuple(records),
                created_at=datetime.fromtimestamp(
                    path.stat().st_mtime, tz=timezone.utc
                ).isoformat(),
                warnings=tuple(report.warnings),
            )

    def add(self, records: list[VisitRecord], warnings: list[str]) -> StoredDataset:
        dataset_id = secrets.token_hex(8)
        stored = StoredDataset(
            id=dataset_id,
            records=tuple(records),
            created_at=datetime.now(tz=timezone.utc).isoformat(),
            warnings=tuple(warnings),
        )
        self._datasets[dataset_id] = stored
        if self._spill_dir is not None:
            (self._spill_dir / f"{dataset_id}.csv").write_text(
                dataset_to_csv(records), encoding="utf-8"
            )
        return stored

    def get(self, dataset_id: str) -> StoredDataset:
        stored = self._datasets.get(dataset_id)
        if stored is None:
            raise HTTPException(status_code=404, detail=f"unknown dataset {dataset_id!r}")
        return stored

    def all_metadata(self) -> list[dict]:
        return [d.metadata() for d in self._datasets.values()]


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    app = FastAPI(title="dddm service", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(config.cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = DatasetStore(config.spill_dir)
    executor = ThreadPoolExecutor(max_workers=4)

    def compute(fn, *args, **kwargs):
        """Run a detection job with the configured wall-clock budget."""
        start = time.perf_counter()
        future = executor.submit(fn, *args, **kwargs)
        try:
            result = future.result(timeout=config.compute_timeout_s)
        except FutureTimeoutError:
            raise HTTPException(
                status_code=504,
                detail=f"computation exceeded {config.compute_timeout_s}s budget",
            )
        except DddmError as exc:
            raise HTTPException(status_code=422, detail=[{"error": str(exc)}])
        return result, round((time.perf_counter() - start) * 1000, 3)

    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/api/datasets", status_code=201)
    async def upload_dataset(request: Request) -> dict:
        body = await request.body()
        if len(body) > config.max_upload_bytes:
            raise HTTPException(
                status_code=413,
                detail=f"upload exceeds the {config.max_upload_bytes}-byte limit",
            )
        try:
            records, report = parse_dataset(body)
        except DddmError as exc:
            raise HTTPException(status_code=422, detail=[{"error": str(exc)}])
        return store.add(records, report.warnings).metadata()

    @app.post("/api/datasets/simulate", status_code=201)
    def simulate_dataset(req: SimulateRequest) -> dict:
        from .simgen import generate_sample

        records = generate_sample(placement=req.placement, seed=req.seed)
        return store.add(records, []).metadata()

    @app.get("/api/datasets")
    def list_datasets() -> list[dict]:
        return store.all_metadata()

    @app.get("/api/datasets/{dataset_id}")
    def dataset_metadata(dataset_id: str) -> dict:
        return store.get(dataset_id).metadata()

    @app.post("/api/detect")
    def detect(req: DetectRequest) -> dict:
        stored = store.get(req.dataset_id)
        params = req.params.to_params()

        def job():
            records = stored.records
            if req.mode == "mh":
                return detection.mh_status(
                    records, params.n_mhh, params.n_mhp, params.t_mh, params.icd_mh
                )
            if req.mode == "su":
                return detection.su_status(
                    records, params.n_suh, params.n_sup, params.t_su, params.icd_su
                )
            if req.mode == "basic":
                return detection.mhsu_status_basic(records, params, force=req.params.force)
            rows = detection.mhsu_status_broad(records, params)
            if req.aggregate:
                return detection.aggregate_windows(rows)
            return rows

        rows, duration_ms = compute(job)
        page = rows[req.offset : req.offset + req.limit]
        return {
            "request": req.model_dump(),
            "total_rows": len(rows),
            "offset": req.offset,
            "limit": req.limit,
            "rows": [_row_to_json(r) for r in page],
            "summary": analytics.summary_to_dict(analytics.summarize(rows)),
            "compute_ms": duration_ms,
        }

    @app.post("/api/sweep")
    def sweep(req: SweepRequest) -> dict:
        stored = store.get(req.dataset_id)
        params = req.params.to_params()

        def job():
            if req.kind == "within-span":
                return [analytics.sweep_within_span(stored.records, params, req.grid)]
            if req.kind == "visit-count":
                return [
                    analytics.sweep_visit_counts(stored.records, params, req.grid, req.ratio)
                ]
            return analytics.sweep_concurrent_span(
                stored.records, params, req.within_spans, req.grid
            )

        series_list, duration_ms = compute(job)
        payload = analytics.sweep_to_json(series_list)
        payload["request"] = req.model_dump()
        payload["compute_ms"] = duration_ms
        return payload

    @app.post("/api/temporal")
    def temporal(req: TemporalRequest) -> dict:
        stored = store.get(req.dataset_id)
        params = req.params.to_params()
        spec = TemporalSpec(unit=req.unit, span=req.span, statistic=req.statistic)

        def job():
            import warnings as warnings_module

            with warnings_module.catch_warnings():
                warnings_module.simplefilter("ignore")
                return analytics.temporal_analysis(
                    stored.records, params, spec, force=req.params.force
                )

        buckets, duration_ms = compute(job)
        payload = analytics.temporal_to_json(buckets, spec)
        payload["request"] = req.model_dump()
        payload["compute_ms"] = duration_ms
        return payload

    if config.ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=config.ui_dir, html=True), name="ui")

    return app
