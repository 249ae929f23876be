"""Command-line front door: simulate, split, detect, summarize, sweep, temporal, serve.

Typical pipeline:

    dddm simulate --out sample.csv
    dddm detect-basic --in sample.csv --out status.csv
    dddm summarize --in status.csv

Exit codes: 0 success, 2 validation problem (bad flag value or input
data), 3 I/O failure, 4 internal error. Output files are written
atomically (temp file + rename). The DDDM_OUT_DIR environment variable
supplies the directory for relative output paths.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from . import analytics, charts, dataio, detection, simgen
from .errors import DatasetFormatError, DddmError, InvalidParameterError, SpanExceedsLimitError
from .models import DddmParams, TemporalSpec

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_INTERNAL = 4


def _out_path(raw: str) -> Path:
    path = Path(raw)
    base = os.environ.get("DDDM_OUT_DIR")
    if base and not path.is_absolute():
        return Path(base) / path
    return path


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _icd_list(raw: str) -> list[str]:
    """Inline comma-separated codes, or @file with one code per line."""
    if raw.startswith("@"):
        lines = Path(raw[1:]).read_text(encoding="utf-8").splitlines()
        return [line.strip() for line in lines if line.strip()]
    return [token for token in raw.split(",") if token.strip()]


def _int_list(raw: str) -> list[int]:
    return [int(token) for token in raw.split(",") if token.strip()]


def _add_param_flags(parser: argparse.ArgumentParser, families: str = "both") -> None:
    if families in ("mh", "both"):
        parser.add_argument("--n-mhh", type=int, default=1,
                            help="minimum hospital visits for mental-health status")
        parser.add_argument("--n-mhp", type=int, default=1,
                            help="minimum physician visits for mental-health status")
        parser.add_argument("--t-mh", type=int, default=60,
                            help="maximum day span among mental-health visits")
        parser.add_argument("--icd-mh", type=str, default="F060,F063,F064,F067",
                            help="mental-health codes: comma-separated or @file")
    if families in ("su", "both"):
        parser.add_argument("--n-suh", type=int, default=1,
                            help="minimum hospital visits for substance-use status")
        parser.add_argument("--n-sup", type=int, default=1,
                            help="minimum physician visits for substance-use status")
        parser.add_argument("--t-su", type=int, default=60,
                            help="maximum day span among substance-use visits")
        parser.add_argument("--icd-su", type=str, default="F100,T4041,F120,F140",
                            help="substance-use codes: comma-separated or @file")
    if families == "both":
        parser.add_argument("--t-mhsu", type=int, default=365,
                            help="maximum day span between the two statuses")


def _params_from_args(args: argparse.Namespace) -> DddmParams:
    return DddmParams(
        n_mhh=getattr(args, "n_mhh", 1),
        n_mhp=getattr(args, "n_mhp", 1),
        n_suh=getattr(args, "n_suh", 1),
        n_sup=getattr(args, "n_sup", 1),
        t_mh=getattr(args, "t_mh", 60),
        t_su=getattr(args, "t_su", 60),
        t_mhsu=getattr(args, "t_mhsu", 365),
        icd_mh=frozenset(_icd_list(getattr(args, "icd_mh", "F060,F063,F064,F067"))),
        icd_su=frozenset(_icd_list(getattr(args, "icd_su", "F100,T4041,F120,F140"))),
    )


def _read_records(path: str):
    with open(path, "r", encoding="utf-8", newline="") as handle:
        records, report = dataio.parse_dataset(handle)
    for warning in report.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return records


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dddm",
        description="Visit-count / time-span cohort detection over administrative visit records",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate the bundled 200-patient sample dataset")
    p.add_argument("--out", default="sample.csv")
    p.add_argument("--placement", choices=["deterministic", "uniform"], default="deterministic")
    p.add_argument("--seed", type=int, default=0)

    for name, families in (
        ("detect-mh", "mh"),
        ("detect-su", "su"),
        ("detect-basic", "both"),
        ("detect-broad", "both"),
    ):
        p = sub.add_parser(name, help=f"{name.replace('-', ' ')} over a dataset CSV")
        p.add_argument("--in", dest="input", required=True)
        p.add_argument("--out", default="status.csv")
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        _add_param_flags(p, families)
        if name == "detect-basic":
            p.add_argument("--force", action="store_true",
                           help="compute even when the data span exceeds --t-mhsu")
        if name == "detect-broad":
            p.add_argument("--aggregate", action="store_true",
                           help="also write the per-patient aggregation next to the windowed table")

    p = sub.add_parser("summarize", help="counts and proportions over a status-table CSV")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", help="optional JSON output path")

    p = sub.add_parser("sweep", help="re-run detection over a parameter grid")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--kind", choices=["within-span", "visit-count", "concurrent-span"],
                   required=True)
    p.add_argument("--grid", type=_int_list, default=None,
                   help="comma-separated grid values (defaults per kind)")
    p.add_argument("--ratio", type=int, default=2,
                   help="physician visits per hospital visit (visit-count sweep)")
    p.add_argument("--within-spans", type=_int_list, default=None,
                   help="within-status spans, one series each (concurrent-span sweep)")
    p.add_argument("--out", default="sweep",
                   help="output prefix; writes <prefix>.csv/.json and optional .svg")
    p.add_argument("--svg", action="store_true", help="also write a line chart")
    _add_param_flags(p)

    p = sub.add_parser("temporal", help="bucketed counts and rates over calendar units")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--unit", choices=["day", "week", "month", "quarter", "year"],
                   default="month")
    p.add_argument("--span", choices=["week", "month", "quarter", "year", "decade"],
                   default="year")
    p.add_argument("--statistic", choices=["frequency", "rate"], default="frequency")
    p.add_argument("--force", action="store_true",
                   help="allow buckets wider than --t-mhsu")
    p.add_argument("--out", default="temporal",
                   help="output prefix; writes <prefix>.csv/.json and optional .svg")
    p.add_argument("--svg", action="store_true", help="also write a bar chart")
    _add_param_flags(p)

    p = sub.add_parser("split", help="partition a dataset by patients or by time")
    p.add_argument("--in", dest="input", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--by-id", type=int, help="unique patients per chunk")
    group.add_argument("--by-time", type=float, help="chunk width in days (fractions allowed)")
    p.add_argument("--strict-appendix", action="store_true",
                   help="time mode: stop at the first empty chunk instead of skipping it")
    p.add_argument("--out-dir", default="chunks")

    p = sub.add_parser("serve", help="run the local HTTP API")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--spill-dir", default=None,
                   help="directory for dataset persistence across restarts")
    p.add_argument("--max-upload-bytes", type=int, default=50 * 1024 * 1024)
    p.add_argument("--compute-timeout", type=float, default=120.0,
                   help="per-request computation budget in seconds")
    p.add_argument("--cors-origin", action="append", default=None,
                   help="allowed browser origin (repeatable; default *)")
    p.add_argument("--ui-dir", default=None,
                   help="optional static directory to serve at /")

    return parser


def _status_rows_to_json(rows) -> str:
    def encode(row):
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

    return json.dumps([encode(r) for r in rows], indent=2) + "\n"


def _write_status(rows, args) -> Path:
    out = _out_path(args.out)
    if args.format == "json":
        _write_text(out, _status_rows_to_json(rows))
    else:
        _write_text(out, dataio.status_table_to_csv(rows))
    return out


def _run_simulate(args) -> int:
    records = simgen.generate_sample(placement=args.placement, seed=args.seed)
    out = _out_path(args.out)
    _write_text(out, dataio.dataset_to_csv(records))
    print(f"wrote {len(records)} visit records for 200 patients to {out}")
    return EXIT_OK


def _run_detect(args) -> int:
    records = _read_records(args.input)
    params = _params_from_args(args)
    warning = params.overlap_warning()
    if warning:
        print(f"warning: {warning}", file=sys.stderr)
    if args.command == "detect-mh":
        rows = detection.mh_status(records, params.n_mhh, params.n_mhp, params.t_mh, params.icd_mh)
    elif args.command == "detect-su":
        rows = detection.su_status(records, params.n_suh, params.n_sup, params.t_su, params.icd_su)
    elif args.command == "detect-basic":
        rows = detection.mhsu_status_basic(records, params, force=args.force)
    else:
        rows = detection.mhsu_status_broad(records, params)
    out = _write_status(rows, args)
    print(f"wrote {len(rows)} status rows to {out}")
    if args.command == "detect-broad" and args.aggregate:
        agg = detection.aggregate_windows(rows)
        agg_path = out.with_name(out.stem + "_by_patient" + out.suffix)
        if args.format == "json":
            _write_text(agg_path, _status_rows_to_json(agg))
        else:
            _write_text(agg_path, dataio.status_table_to_csv(agg))
        print(f"wrote {len(agg)} aggregated rows to {agg_path}")
    return EXIT_OK


def _run_summarize(args) -> int:
    with open(args.input, "r", encoding="utf-8", newline="") as handle:
        rows = dataio.read_status_table(handle)
    stats = analytics.summarize(rows)
    print(analytics.summary_to_text(stats))
    if args.out:
        _write_text(_out_path(args.out), json.dumps(analytics.summary_to_dict(stats), indent=2) + "\n")
    return EXIT_OK


_SWEEP_X_LABELS = {
    "within-span": "maximum day span within each status (t_mh = t_su)",
    "visit-count": "required hospital visits (physician = ratio x)",
    "concurrent-span": "maximum day span between statuses (t_mhsu)",
}


def _run_sweep(args) -> int:
    records = _read_records(args.input)
    params = _params_from_args(args)
    if args.kind == "within-span":
        series_list = [analytics.sweep_within_span(records, params, args.grid)]
    elif args.kind == "visit-count":
        series_list = [analytics.sweep_visit_counts(records, params, args.grid, args.ratio)]
    else:
        series_list = analytics.sweep_concurrent_span(
            records, params, args.within_spans, args.grid
        )
    prefix = _out_path(args.out)
    if len(series_list) == 1:
        _write_text(prefix.with_suffix(".csv"), analytics.sweep_to_csv(series_list[0]))
    else:
        for series in series_list:
            suffix = series.label.replace("=", "").replace(" ", "_")
            _write_text(
                prefix.with_name(f"{prefix.name}_{suffix}.csv"),
                analytics.sweep_to_csv(series),
            )
    _write_text(
        prefix.with_suffix(".json"),
        json.dumps(analytics.sweep_to_json(series_list), indent=2) + "\n",
    )
    if args.svg:
        svg = charts.sweep_chart_svg(series_list, _SWEEP_X_LABELS[args.kind])
        _write_text(prefix.with_suffix(".svg"), svg)
    total = sum(len(s.points) for s in series_list)
    print(f"computed {total} sweep points across {len(series_list)} series -> {prefix}.csv/.json")
    return EXIT_OK


def _run_temporal(args) -> int:
    records = _read_records(args.input)
    params = _params_from_args(args)
    spec = TemporalSpec(unit=args.unit, span=args.span, statistic=args.statistic)
    buckets = analytics.temporal_analysis(records, params, spec, force=args.force)
    prefix = _out_path(args.out)
    _write_text(prefix.with_suffix(".csv"), analytics.temporal_to_csv(buckets))
    _write_text(
        prefix.with_suffix(".json"),
        json.dumps(analytics.temporal_to_json(buckets, spec), indent=2) + "\n",
    )
    if args.svg:
        _write_text(
            prefix.with_suffix(".svg"),
            charts.temporal_chart_svg(buckets, spec.statistic),
        )
    print(f"computed {len(buckets)} {spec.unit} buckets -> {prefix}.csv/.json")
    return EXIT_OK


def _run_split(args) -> int:
    records = _read_records(args.input)
    if args.by_id is not None:
        chunks = dataio.split_by_id(records, args.by_id)
    else:
        chunks = dataio.split_by_time(records, args.by_time, strict_appendix=args.strict_appendix)
    out_dir = _out_path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    width = max(3, len(str(len(chunks))))
    for i, chunk in enumerate(chunks, start=1):
        _write_text(out_dir / f"chunk_{str(i).zfill(width)}.csv", dataio.dataset_to_csv(chunk))
    print(f"wrote {len(chunks)} chunks to {out_dir}")
    return EXIT_OK


def _run_serve(args) -> int:
    import uvicorn

    from .service import ServiceConfig, create_app

    config = ServiceConfig(
        max_upload_bytes=args.max_upload_bytes,
        spill_dir=Path(args.spill_dir) if args.spill_dir else None,
        cors_origins=tuple(args.cors_origin) if args.cors_origin else ("*",),
        compute_timeout_s=args.compute_timeout,
        ui_dir=Path(args.ui_dir) if args.ui_dir else None,
    )
    uvicorn.run(create_app(config), host=args.host, port=args.port)
    return EXIT_OK


_RUNNERS = {
    "simulate": _run_simulate,
    "detect-mh": _run_detect,
    "detect-su": _run_detect,
    "detect-basic": _run_detect,
    "detect-broad": _run_detect,
    "summarize": _run_summarize,
    "sweep": _run_sweep,
    "temporal": _run_temporal,
    "split": _run_split,
    "serve": _run_serve,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _RUNNERS[args.command](args)
    except (InvalidParameterError, DatasetFormatError, SpanExceedsLimitError, DddmError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
