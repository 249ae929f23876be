/**
 * SVG chart builders for sweep series and temporal buckets.
 *
 * Pure string generation so charts render identically in tests and in
 * the browser; values are plotted exactly as the service reported
 * them.
 */

import type { PinnedSweep, SweepSeries, TemporalBucket } from './types.js';

export const PALETTE = ['#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e', '#8c564b'];

const WIDTH = 680;
const HEIGHT = 400;
const MARGIN = { left: 56, right: 16, top: 32, bottom: 52 };

export interface ChartLine {
  label: string;
  points: { x: number; y: number }[];
}

function escapeXml(value: string): string {
  return value
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

/** Flatten sweep series into named lines, one per tracked count. */
export function sweepLines(series: SweepSeries[], seriesPrefix = ''): ChartLine[] {
  const lines: ChartLine[] = [];
  for (const s of series) {
    const tracked: [string, { x: number; y: number }[]][] = [
      ['MH', s.points.filter((p) => p.mh !== null).map((p) => ({ x: p.x, y: p.mh as number }))],
      ['SU', s.points.filter((p) => p.su !== null).map((p) => ({ x: p.x, y: p.su as number }))],
      ['MHSU', s.points.map((p) => ({ x: p.x, y: p.mhsu }))],
    ];
    for (const [name, points] of tracked) {
      if (points.length === 0) continue;
      const qualifier = series.length > 1 ? ` (${s.label})` : '';
      lines.push({ label: `${seriesPrefix}${name}${qualifier}`, points });
    }
  }
  return lines;
}

/** Merge the current sweep with pinned ones so regimes compare side by side. */
export function comparisonLines(current: SweepSeries[] | null, pinned: PinnedSweep[]): ChartLine[] {
  const lines: ChartLine[] = [];
  if (current) lines.push(...sweepLines(current));
  for (const pin of pinned) {
    lines.push(...sweepLines(pin.series, `${pin.label}: `));
  }
  return lines;
}

function ticks(low: number, high: number, count = 5): number[] {
  if (high <= low) high = low + 1;
  const step = (high - low) / count;
  return Array.from({ length: count + 1 }, (_, i) => low + i * step);
}

function fmt(value: number): string {
  return Number.isInteger(value) ? String(value) : value.toFixed(1);
}

export function lineChartSvg(lines: ChartLine[], xLabel: string, yLabel: string): string {
  const xs = lines.flatMap((l) => l.points.map((p) => p.x));
  const ys = lines.flatMap((l) => l.points.map((p) => p.y));
  const xLo = xs.length ? Math.min(...xs) : 0;
  const xHi = xs.length ? Math.max(...xs) : 1;
  const yHi = Math.max(1, ...ys);
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const px = (x: number) => MARGIN.left + ((x - xLo) / Math.max(1e-9, xHi - xLo)) * plotW;
  const py = (y: number) => MARGIN.top + plotH - (y / yHi) * plotH;

  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif" font-size="11">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
    `<text x="${WIDTH / 2}" y="${HEIGHT - 8}" text-anchor="middle">${escapeXml(xLabel)}</text>`,
    `<text x="14" y="${HEIGHT / 2}" text-anchor="middle" transform="rotate(-90 14 ${HEIGHT / 2})">${escapeXml(yLabel)}</text>`,
  ];
  for (const tick of ticks(0, yHi)) {
    const y = py(tick);
    parts.push(`<line x1="${MARGIN.left}" y1="${y}" x2="${WIDTH - MARGIN.right}" y2="${y}" stroke="#e3e3e3"/>`);
    parts.push(`<text x="${MARGIN.left - 6}" y="${y + 4}" text-anchor="end">${fmt(tick)}</text>`);
  }
  for (const tick of ticks(xLo, xHi)) {
    const x = px(tick);
    parts.push(`<text x="${x}" y="${MARGIN.top + plotH + 16}" text-anchor="middle">${fmt(tick)}</text>`);
  }
  lines.forEach((line, i) => {
    const color = PALETTE[i % PALETTE.length];
    const coords = line.points.map((p) => `${px(p.x).toFixed(1)},${py(p.y).toFixed(1)}`).join(' ');
    parts.push(`<polyline points="${coords}" fill="none" stroke="${color}" stroke-width="2"/>`);
    for (const p of line.points) {
      parts.push(`<circle cx="${px(p.x).toFixed(1)}" cy="${py(p.y).toFixed(1)}" r="3" fill="${color}"/>`);
    }
    parts.push(
      `<rect x="${MARGIN.left + 8}" y="${MARGIN.top + 4 + 16 * i}" width="10" height="10" fill="${color}"/>`,
      `<text x="${MARGIN.left + 22}" y="${MARGIN.top + 13 + 16 * i}">${escapeXml(line.label)}</text>`,
    );
  });
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" fill="none" stroke="#333"/>`,
    '</svg>',
  );
  return parts.join('\n');
}

export function temporalBarSvg(buckets: TemporalBucket[], statistic: 'frequency' | 'rate'): string {
  const series: [string, number[]][] =
    statistic === 'rate'
      ? [
          ['MH', buckets.map((b) => Number(b.mh_rate))],
          ['SU', buckets.map((b) => Number(b.su_rate))],
          ['MHSU', buckets.map((b) => Number(b.mhsu_rate))],
        ]
      : [
          ['MH', buckets.map((b) => b.mh)],
          ['SU', buckets.map((b) => b.su)],
          ['MHSU', buckets.map((b) => b.mhsu)],
        ];
  const yHi = Math.max(1e-9, ...series.flatMap(([, values]) => values));
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const groupW = plotW / Math.max(1, buckets.length);
  const barW = (groupW * 0.75) / series.length;
  const py = (y: number) => MARGIN.top + plotH - (y / yHi) * plotH;

  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif" font-size="11">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
    `<text x="${WIDTH / 2}" y="${HEIGHT - 8}" text-anchor="middle">bucket</text>`,
    `<text x="14" y="${HEIGHT / 2}" text-anchor="middle" transform="rotate(-90 14 ${HEIGHT / 2})">${
      statistic === 'rate' ? 'rate per active patient' : 'patients detected'
    }</text>`,
  ];
  for (const tick of ticks(0, yHi)) {
    const y = py(tick);
    parts.push(`<line x1="${MARGIN.left}" y1="${y}" x2="${WIDTH - MARGIN.right}" y2="${y}" stroke="#e3e3e3"/>`);
    parts.push(
      `<text x="${MARGIN.left - 6}" y="${y + 4}" text-anchor="end">${statistic === 'rate' ? tick.toFixed(2) : fmt(tick)}</text>`,
    );
  }
  buckets.forEach((bucket, ci) => {
    const gx = MARGIN.left + ci * groupW;
    series.forEach(([, values], si) => {
      const v = values[ci];
      const x = gx + groupW * 0.125 + si * barW;
      parts.push(
        `<rect x="${x.toFixed(1)}" y="${py(v).toFixed(1)}" width="${barW.toFixed(1)}" height="${(
          MARGIN.top + plotH - py(v)
        ).toFixed(1)}" fill="${PALETTE[si % PALETTE.length]}"/>`,
      );
    });
    parts.push(
      `<text x="${(gx + groupW / 2).toFixed(1)}" y="${MARGIN.top + plotH + 16}" text-anchor="middle" font-size="9">${escapeXml(bucket.bucket)}</text>`,
    );
  });
  series.forEach(([name], i) => {
    parts.push(
      `<rect x="${MARGIN.left + 8}" y="${MARGIN.top + 4 + 16 * i}" width="10" height="10" fill="${PALETTE[i]}"/>`,
      `<text x="${MARGIN.left + 22}" y="${MARGIN.top + 13 + 16 * i}">${name}</text>`,
    );
  });
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" fill="none" stroke="#333"/>`,
    '</svg>',
  );
  return parts.join('\n');
}
