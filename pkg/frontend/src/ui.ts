/**
 * DOM wiring for the four exploration panels: load, detect, sweep,
 * temporal. Rendering reads exclusively from the store's state; every
 * result view shows the exact parameters echoed by the service.
 */

import { comparisonLines, lineChartSvg, temporalBarSvg } from './charts.js';
import type { ExplorationStore } from './state.js';
import type { DetectMode, DetectionParams, StatusRow, SweepKind } from './types.js';
import { parseGrid, parseIcdList } from './validation.js';

const $ = <T extends HTMLElement = HTMLElement>(selector: string): T => {
  const el = document.querySelector<T>(selector);
  if (!el) throw new Error(`missing element ${selector}`);
  return el;
};

function escapeHtml(value: unknown): string {
  return String(value ?? '')
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

const NUMERIC_FIELDS = ['n_mhh', 'n_mhp', 'n_suh', 'n_sup', 't_mh', 't_su', 't_mhsu'] as const;

export function paramsSummary(params: DetectionParams): string {
  return (
    `n_mhh=${params.n_mhh} n_mhp=${params.n_mhp} n_suh=${params.n_suh} n_sup=${params.n_sup} ` +
    `t_mh=${params.t_mh} t_su=${params.t_su} t_mhsu=${params.t_mhsu} | ` +
    `MH codes: ${params.icd_mh.join(', ')} | SU codes: ${params.icd_su.join(', ')}`
  );
}

export function bindUi(store: ExplorationStore): void {
  // Load panel
  $('#generate-sample').addEventListener('click', () => {
    const placement = ($('#placement') as HTMLSelectElement).value as 'deterministic' | 'uniform';
    const seed = Number(($('#seed') as HTMLInputElement).value) || 0;
    void store.generateSample(placement, seed);
  });
  $('#upload').addEventListener('change', async (event) => {
    const input = event.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    void store.uploadCsv(await file.text());
    input.value = '';
  });

  // Parameter form
  for (const field of NUMERIC_FIELDS) {
    const input = $(`#param-${field}`) as HTMLInputElement;
    input.addEventListener('input', () => {
      store.setParam(field, Number(input.value));
    });
  }
  for (const field of ['icd_mh', 'icd_su'] as const) {
    const input = $(`#param-${field}`) as HTMLInputElement;
    input.addEventListener('change', () => {
      const { codes, invalid } = parseIcdList(input.value);
      // keep invalid tokens visible so the field error points at them
      store.setParam(field, invalid.length ? [...codes, ...invalid] : codes);
      if (!invalid.length) input.value = codes.join(', ');
    });
  }

  $('#run-detect').addEventListener('click', () => {
    const mode = ($('#detect-mode') as HTMLSelectElement).value as DetectMode;
    void store.runDetection(mode, { aggregate: mode === 'broad' });
  });

  // Sweep panel
  $('#run-sweep').addEventListener('click', () => {
    const kind = ($('#sweep-kind') as HTMLSelectElement).value as SweepKind;
    const gridRaw = ($('#sweep-grid') as HTMLInputElement).value.trim();
    const ratio = Number(($('#sweep-ratio') as HTMLInputElement).value) || 2;
    const spansRaw = ($('#sweep-within-spans') as HTMLInputElement).value.trim();
    const options: { grid?: number[]; ratio?: number; withinSpans?: number[] } = { ratio };
    if (gridRaw) {
      const { values, error } = parseGrid(gridRaw);
      if (error) {
        $('#sweep-error').textContent = `grid: ${error}`;
        return;
      }
      options.grid = values;
    }
    if (spansRaw && kind === 'concurrent-span') {
      const { values, error } = parseGrid(spansRaw);
      if (error) {
        $('#sweep-error').textContent = `within spans: ${error}`;
        return;
      }
      options.withinSpans = values;
    }
    void store.runSweep(kind, options);
  });
  $('#pin-sweep').addEventListener('click', () => {
    const label = ($('#pin-label') as HTMLInputElement).value.trim() || undefined;
    store.pinLastSweep(label);
  });

  // Temporal panel
  $('#run-temporal').addEventListener('click', () => {
    store.setTemporalSpec({
      unit: ($('#temporal-unit') as HTMLSelectElement).value as never,
      span: ($('#temporal-span') as HTMLSelectElement).value as never,
      statistic: ($('#temporal-statistic') as HTMLSelectElement).value as never,
    });
    void store.runTemporal();
  });

  store.subscribe(() => render(store));
  render(store);
}

function render(store: ExplorationStore): void {
  const state = store.getState();

  // dataset metadata
  const dataset = state.dataset;
  $('#dataset-meta').innerHTML = dataset
    ? `<b>dataset ${escapeHtml(dataset.id)}</b> — ${dataset.row_count} visits, ` +
      `${dataset.client_count} patients, ${escapeHtml(dataset.min_date)} … ${escapeHtml(dataset.max_date)}`
    : 'no dataset loaded';
  $('#load-error').textContent = state.panelError.load ?? '';

  // field errors + submit gating
  for (const field of [...NUMERIC_FIELDS, 'icd_mh', 'icd_su'] as const) {
    const message = state.fieldErrors[field];
    $(`#error-${field}`).textContent = message ?? '';
  }
  for (const field of ['icd_mh', 'icd_su'] as const) {
    $(`#chips-${field}`).innerHTML = state.params[field]
      .map((code) => `<span class="chip">${escapeHtml(code)}</span>`)
      .join('');
  }
  const invalid = Object.keys(state.fieldErrors).length > 0;
  ($('#run-detect') as HTMLButtonElement).disabled = invalid || !!state.busy.detect;
  ($('#run-sweep') as HTMLButtonElement).disabled = invalid || !!state.busy.sweep;
  ($('#run-temporal') as HTMLButtonElement).disabled = invalid || !!state.busy.temporal;

  renderDetection(state);
  renderSweep(state);
  renderTemporal(state);
}

type State = ReturnType<ExplorationStore['getState']>;

function renderDetection(state: State): void {
  $('#detect-error').textContent = state.panelError.detect ?? '';
  const detection = state.detection;
  if (!detection) {
    $('#summary-cards').innerHTML = '';
    $('#detect-params').textContent = '';
    $('#status-table').innerHTML = '';
    return;
  }
  const s = detection.summary;
  $('#summary-cards').innerHTML = [
    ['MH', s.mh_count, s.mh_proportion],
    ['SU', s.su_count, s.su_proportion],
    ['MHSU', s.mhsu_count, s.mhsu_proportion],
  ]
    .map(
      ([name, count, prop]) =>
        `<div class="card"><div class="card-name">${name}</div>` +
        `<div class="card-count">${count}</div><div class="card-prop">${prop}</div></div>`,
    )
    .join('');
  $('#detect-params').textContent =
    `parameters: ${paramsSummary(detection.request.params)} | ` +
    `${detection.total_rows} rows in ${detection.compute_ms} ms`;
  $('#status-table').innerHTML = statusTableHtml(detection.rows.slice(0, 50));
}

function statusTableHtml(rows: StatusRow[]): string {
  if (!rows.length) return '<p>no rows</p>';
  const hasWindow = rows.some((r) => r.window !== null);
  const header =
    '<tr><th>Client</th>' +
    (hasWindow ? '<th>Window</th>' : '') +
    '<th>MH earliest</th><th>MH latest</th><th>MH</th>' +
    '<th>SU earliest</th><th>SU latest</th><th>SU</th><th>MHSU</th></tr>';
  const body = rows
    .map(
      (r) =>
        `<tr><td>${escapeHtml(r.client_id)}</td>` +
        (hasWindow ? `<td>${r.window ?? ''}</td>` : '') +
        `<td>${r.mh_earliest ?? 'NA'}</td><td>${r.mh_latest ?? 'NA'}</td><td>${r.mh_status ?? ''}</td>` +
        `<td>${r.su_earliest ?? 'NA'}</td><td>${r.su_latest ?? 'NA'}</td><td>${r.su_status ?? ''}</td>` +
        `<td>${r.mhsu_status ?? ''}</td></tr>`,
    )
    .join('');
  return `<table>${header}${body}</table>`;
}

function renderSweep(state: State): void {
  $('#sweep-error').textContent = state.panelError.sweep ?? '';
  const lines = comparisonLines(state.sweep?.series ?? null, state.pinned);
  $('#sweep-chart').innerHTML = lines.length
    ? lineChartSvg(lines, sweepAxisLabel(state.sweepKind), 'patients detected')
    : '';
  const echo = state.sweep?.request?.params;
  $('#sweep-params').textContent = echo ? `parameters: ${paramsSummary(echo)}` : '';
  $('#pinned-list').innerHTML = state.pinned
    .map(
      (pin, i) =>
        `<li><b>${escapeHtml(pin.label)}</b> (${escapeHtml(pin.kind)}) — ` +
        `${escapeHtml(paramsSummary(pin.params))} ` +
        `<button data-unpin="${i}">unpin</button></li>`,
    )
    .join('');
  document.querySelectorAll<HTMLButtonElement>('[data-unpin]').forEach((button) => {
    button.addEventListener('click', () => {
      const index = Number(button.dataset.unpin);
      (window as unknown as { __store: ExplorationStore }).__store.unpin(index);
    });
  });
}

function sweepAxisLabel(kind: SweepKind): string {
  switch (kind) {
    case 'within-span':
      return 'maximum day span within each status (t_mh = t_su)';
    case 'visit-count':
      return 'required hospital visits (physician = ratio x)';
    case 'concurrent-span':
      return 'maximum day span between statuses (t_mhsu)';
  }
}

function renderTemporal(state: State): void {
  $('#temporal-error').textContent = state.panelError.temporal ?? '';
  const temporal = state.temporal;
  if (!temporal) {
    $('#temporal-chart').innerHTML = '';
    $('#temporal-params').textContent = '';
    return;
  }
  $('#temporal-chart').innerHTML = temporalBarSvg(
    temporal.buckets,
    temporal.statistic as 'frequency' | 'rate',
  );
  const echo = (temporal.request as { params?: DetectionParams } | undefined)?.params;
  $('#temporal-params').textContent =
    `[${temporal.unit}, ${temporal.span}] ${temporal.statistic}` +
    (echo ? ` | parameters: ${paramsSummary(echo)}` : '');
}
