"""Minimal self-contained SVG emission for sweep and temporal results.

Static line and grouped-bar charts with labeled axes and a legend; no
plotting dependency, so the output embeds anywhere a static image
does.
"""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

from .models import SweepSeries, TemporalBucket

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

_WIDTH = 720
_HEIGHT = 460
_MARGIN_L = 64
_MARGIN_R = 24
_MARGIN_T = 40
_MARGIN_B = 64


def _axis_ticks(low: float, high: float, count: int = 5) -> list[float]:
    if high <= low:
        high = low + 1
    step = (high - low) / count
    return [low + i * step for i in range(count + 1)]


def _fmt(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else f"{v:.1f}"


def _frame(title: str, x_label: str, y_label: str) -> list[str]:
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<text x="{_WIDTH / 2}" y="22" text-anchor="middle" font-size="15">{escape(title)}</text>',
        f'<text x="{_WIDTH / 2}" y="{_HEIGHT - 12}" text-anchor="middle">{escape(x_label)}</text>',
        f'<text x="16" y="{_HEIGHT / 2}" text-anchor="middle" '
        f'transform="rotate(-90 16 {_HEIGHT / 2})">{escape(y_label)}</text>',
    ]
    return parts


def _legend(parts: list[str], labels: Sequence[str]):
    x = _MARGIN_L + 8
    y = _MARGIN_T + 4
    for i, label in enumerate(labels):
        color = PALETTE[i % len(PALETTE)]
        parts.append(f'<rect x="{x}" y="{y + 18 * i}" width="12" height="12" fill="{color}"/>')
        parts.append(f'<text x="{x + 18}" y="{y + 18 * i + 10}">{escape(label)}</text>')


def line_chart_svg(
    series: Sequence[tuple[str, Sequence[tuple[float, float]]]],
    x_label: str,
    y_label: str,
    title: str = "",
) -> str:
    """Multi-series line chart; each series is (label, [(x, y), ...])."""
    xs = [x for _, pts in series for x, _ in pts]
    ys = [y for _, pts in series for _, y in pts]
    if not xs:
        xs, ys = [0.0], [0.0]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = 0.0, max(ys + [1.0])
    if x_hi == x_lo:
        x_hi = x_lo + 1

    plot_w = _WIDTH - _MARGIN_L - _MARGIN_R
    plot_h = _HEIGHT - _MARGIN_T - _MARGIN_B

    def px(x: float) -> float:
        return _MARGIN_L + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        return _MARGIN_T + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h

    parts = _frame(title, x_label, y_label)
    for tick in _axis_ticks(y_lo, y_hi):
        y = py(tick)
        parts.append(
            f'<line x1="{_MARGIN_L}" y1="{y:.1f}" x2="{_WIDTH - _MARGIN_R}" y2="{y:.1f}" '
            'stroke="#ddd"/>'
        )
        parts.append(f'<text x="{_MARGIN_L - 8}" y="{y + 4:.1f}" text-anchor="end">{_fmt(tick)}</text>')
    for tick in _axis_ticks(x_lo, x_hi):
        x = px(tick)
        parts.append(
            f'<line x1="{x:.1f}" y1="{_MARGIN_T + plot_h}" x2="{x:.1f}" '
            f'y2="{_MARGIN_T + plot_h + 5}" stroke="#333"/>'
        )
        parts.append(
            f'<text x="{x:.1f}" y="{_MARGIN_T + plot_h + 20}" text-anchor="middle">{_fmt(tick)}</text>'
        )
    parts.append(
        f'<rect x="{_MARGIN_L}" y="{_MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#333"/>'
    )
    for i, (label, pts) in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        coords = " ".join(f"{px(x):.1f},{py(y):.1f}" for x, y in pts)
        parts.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="2"/>')
        for x, y in pts:
            parts.append(f'<circle cx="{px(x):.1f}" cy="{py(y):.1f}" r="3" fill="{color}"/>')
    _legend(parts, [label for label, _ in series])
    parts.append("</svg>")
    return "\n".join(parts)


def bar_chart_svg(
    categories: Sequence[str],
    series: Sequence[tuple[str, Sequence[float]]],
    x_label: str,
    y_label: str,
    title: str = "",
) -> str:
    """Grouped bar chart; each series supplies one value per category."""
    values = [v for _, vals in series for v in vals]
    y_hi = max(values + [1.0])
    plot_w = _WIDTH - _MARGIN_L - _MARGIN_R
    plot_h = _HEIGHT - _MARGIN_T - _MARGIN_B
    n_cat = max(1, len(categories))
    group_w = plot_w / n_cat
    bar_w = group_w * 0.8 / max(1, len(series))

    def py(y: float) -> float:
        return _MARGIN_T + plot_h - y / y_hi * plot_h

    parts = _frame(title, x_label, y_label)
    for tick in _axis_ticks(0, y_hi):
        y = py(tick)
        parts.append(
            f'<line x1="{_MARGIN_L}" y1="{y:.1f}" x2="{_WIDTH - _MARGIN_R}" y2="{y:.1f}" '
            'stroke="#ddd"/>'
        )
        parts.append(f'<text x="{_MARGIN_L - 8}" y="{y + 4:.1f}" text-anchor="end">{_fmt(tick)}</text>')
    for ci, cat in enumerate(categories):
        gx = _MARGIN_L + ci * group_w
        for si, (_, vals) in enumerate(series):
            v = vals[ci]
            x = gx + group_w * 0.1 + si * bar_w
            parts.append(
                f'<rect x="{x:.1f}" y="{py(v):.1f}" width="{bar_w:.1f}" '
                f'height="{_MARGIN_T + plot_h - py(v):.1f}" fill="{PALETTE[si % len(PALETTE)]}"/>'
            )
        parts.append(
            f'<text x="{gx + group_w / 2:.1f}" y="{_MARGIN_T + plot_h + 20}" text-anchor="middle" '
            f'font-size="10">{escape(cat)}</text>'
        )
    parts.append(
        f'<rect x="{_MARGIN_L}" y="{_MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#333"/>'
    )
    _legend(parts, [label for label, _ in series])
    parts.append("</svg>")
    return "\n".join(parts)


def sweep_chart_svg(series_list: Sequence[SweepSeries], x_label: str, title: str = "") -> str:
    """Line chart for sweep output: one line per tracked count per series."""
    lines: list[tuple[str, list[tuple[float, float]]]] = []
    for s in series_list:
        tracked = [
            ("MH", [(p.x, p.mh_count) for p in s.points if p.mh_count is not None]),
            ("SU", [(p.x, p.su_count) for p in s.points if p.su_count is not None]),
            ("MHSU", [(p.x, p.mhsu_count) for p in s.points]),
        ]
        for name, pts in tracked:
            if not pts:
                continue
            label = name if len(series_list) == 1 else f"{name} ({s.label})"
            lines.append((label, pts))
    return line_chart_svg(lines, x_label, "patients detected", title)


def temporal_chart_svg(buckets: Sequence[TemporalBucket], statistic: str, title: str = "") -> str:
    """Grouped bars of per-bucket frequencies or rates."""
    categories = [b.label for b in buckets]
    if statistic == "rate":
        series = [
            ("MH", [float(b.mh_rate) for b in buckets]),
            ("SU", [float(b.su_rate) for b in buckets]),
            ("MHSU", [float(b.mhsu_rate) for b in buckets]),
        ]
        y_label = "rate per active patient"
    else:
        series = [
            ("MH", [float(b.mh_count) for b in buckets]),
            ("SU", [float(b.su_count) for b in buckets]),
            ("MHSU", [float(b.mhsu_count) for b in buckets]),
        ]
        y_label = "patients detected"
    return bar_chart_svg(categories, series, "bucket", y_label, title)
