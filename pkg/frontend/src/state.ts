/**
 * Exploration session state: the active dataset, the parameter form,
 * the latest results per panel, and pinned sweep series for
 * comparison. All numbers shown in the UI come verbatim from service
 * payloads stored here; no detection arithmetic happens client-side.
 *
 * Each panel allows one in-flight request; a response is discarded
 * when a newer submission from the same panel has superseded it.
 */

import { ApiError, type DetectionApi } from './api.js';
import type {
  DatasetMeta,
  DetectMode,
  DetectResponse,
  DetectionParams,
  PinnedSweep,
  SweepKind,
  SweepResponse,
  TemporalResponse,
  TemporalSpec,
} from './types.js';
import { DEFAULT_PARAMS } from './types.js';
import { isValid, validateParams, type FieldErrors } from './validation.js';

export type Panel = 'load' | 'detect' | 'sweep' | 'temporal';

export interface ExplorationState {
  dataset: DatasetMeta | null;
  params: DetectionParams;
  fieldErrors: FieldErrors;
  detection: DetectResponse | null;
  sweep: SweepResponse | null;
  sweepKind: SweepKind;
  pinned: PinnedSweep[];
  temporalSpec: TemporalSpec;
  temporal: TemporalResponse | null;
  busy: Partial<Record<Panel, boolean>>;
  panelError: Partial<Record<Panel, string>>;
}

type Listener = (state: ExplorationState) => void;

export class ExplorationStore {
  private state: ExplorationState = {
    dataset: null,
    params: { ...DEFAULT_PARAMS, icd_mh: [...DEFAULT_PARAMS.icd_mh], icd_su: [...DEFAULT_PARAMS.icd_su] },
    fieldErrors: {},
    detection: null,
    sweep: null,
    sweepKind: 'visit-count',
    pinned: [],
    temporalSpec: { unit: 'month', span: 'year', statistic: 'frequency' },
    temporal: null,
    busy: {},
    panelError: {},
  };

  private listeners: Listener[] = [];
  private requestSeq: Partial<Record<Panel, number>> = {};

  constructor(private api: DetectionApi) {}

  getState(): ExplorationState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private update(patch: Partial<ExplorationState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  private begin(panel: Panel): number {
    const seq = (this.requestSeq[panel] ?? 0) + 1;
    this.requestSeq[panel] = seq;
    this.update({
      busy: { ...this.state.busy, [panel]: true },
      panelError: { ...this.state.panelError, [panel]: undefined },
    });
    return seq;
  }

  /** True when this response is still the panel's latest submission. */
  private fresh(panel: Panel, seq: number): boolean {
    return this.requestSeq[panel] === seq;
  }

  private finish(panel: Panel, seq: number, patch: Partial<ExplorationState>): boolean {
    if (!this.fresh(panel, seq)) return false; // stale response: discard
    this.update({ ...patch, busy: { ...this.state.busy, [panel]: false } });
    return true;
  }

  private fail(panel: Panel, seq: number, error: unknown): void {
    if (!this.fresh(panel, seq)) return;
    let message = error instanceof Error ? error.message : String(error);
    let fieldErrors: FieldErrors = {};
    if (error instanceof ApiError && error.status === 422) {
      fieldErrors = error.fieldErrors() as FieldErrors;
      message = `the service rejected the request: ${message}`;
    } else if (!(error instanceof ApiError)) {
      message = `could not reach the service (${message}) — check it is running and retry`;
    }
    this.update({
      busy: { ...this.state.busy, [panel]: false },
      panelError: { ...this.state.panelError, [panel]: message },
      fieldErrors: { ...this.state.fieldErrors, ...fieldErrors },
    });
  }

  // Parameter form ----------------------------------------------------------

  setParam<K extends keyof DetectionParams>(field: K, value: DetectionParams[K]): void {
    const params = { ...this.state.params, [field]: value };
    this.update({ params, fieldErrors: validateParams(params) });
  }

  /** Repopulate the form from a result echo (round-trip support). */
  adoptParams(params: DetectionParams): void {
    const copy = { ...params, icd_mh: [...params.icd_mh], icd_su: [...params.icd_su] };
    this.update({ params: copy, fieldErrors: validateParams(copy) });
  }

  /** Validation gate used by every submitting panel. */
  validate(): boolean {
    const errors = validateParams(this.state.params);
    this.update({ fieldErrors: errors });
    return isValid(errors);
  }

  // Load panel --------------------------------------------------------------

  async generateSample(placement: 'deterministic' | 'uniform' = 'deterministic', seed = 0): Promise<void> {
    const seq = this.begin('load');
    try {
      const dataset = await this.api.simulateDataset(placement, seed);
      this.finish('load', seq, { dataset, detection: null, sweep: null, temporal: null });
    } catch (error) {
      this.fail('load', seq, error);
    }
  }

  async uploadCsv(text: string): Promise<void> {
    const seq = this.begin('load');
    try {
      const dataset = await this.api.uploadDataset(text);
      this.finish('load', seq, { dataset, detection: null, sweep: null, temporal: null });
    } catch (error) {
      this.fail('load', seq, error);
    }
  }

  // Detect panel ------------------------------------------------------------

  async runDetection(mode: DetectMode, options: { aggregate?: boolean; offset?: number } = {}): Promise<void> {
    if (!this.state.dataset) {
      this.update({ panelError: { ...this.state.panelError, detect: 'load a dataset first' } });
      return;
    }
    if (!this.validate()) return; // blocked client-side before any request
    const seq = this.begin('detect');
    try {
      const detection = await this.api.detect(this.state.dataset.id, mode, this.state.params, options);
      this.finish('detect', seq, { detection });
    } catch (error) {
      this.fail('detect', seq, error);
    }
  }

  // Sweep panel -------------------------------------------------------------

  async runSweep(
    kind: SweepKind,
    options: { grid?: number[]; ratio?: number; withinSpans?: number[] } = {},
  ): Promise<void> {
    if (!this.state.dataset) {
      this.update({ panelError: { ...this.state.panelError, sweep: 'load a dataset first' } });
      return;
    }
    if (!this.validate()) return;
    const seq = this.begin('sweep');
    try {
      const sweep = await this.api.sweep(this.state.dataset.id, kind, this.state.params, options);
      this.finish('sweep', seq, { sweep, sweepKind: kind });
    } catch (error) {
      this.fail('sweep', seq, error);
    }
  }

  /** Keep the latest sweep for side-by-side comparison. */
  pinLastSweep(label?: string): void {
    const sweep = this.state.sweep;
    if (!sweep) return;
    const params = sweep.request?.params ?? this.state.params;
    const pin: PinnedSweep = {
      label: label ?? `pin ${this.state.pinned.length + 1}`,
      kind: this.state.sweepKind,
      series: sweep.series,
      params: { ...params, icd_mh: [...params.icd_mh], icd_su: [...params.icd_su] },
      pinnedAt: new Date().toISOString(),
    };
    this.update({ pinned: [...this.state.pinned, pin] });
  }

  unpin(index: number): void {
    this.update({ pinned: this.state.pinned.filter((_, i) => i !== index) });
  }

  // Temporal panel ----------------------------------------------------------

  setTemporalSpec(spec: Partial<TemporalSpec>): void {
    this.update({ temporalSpec: { ...this.state.temporalSpec, ...spec } });
  }

  async runTemporal(): Promise<void> {
    if (!this.state.dataset) {
      this.update({ panelError: { ...this.state.panelError, temporal: 'load a dataset first' } });
      return;
    }
    if (!this.validate()) return;
    const seq = this.begin('temporal');
    try {
      const temporal = await this.api.temporal(
        this.state.dataset.id,
        this.state.temporalSpec,
        this.state.params,
      );
      this.finish('temporal', seq, { temporal });
    } catch (error) {
      this.fail('temporal', seq, error);
    }
  }
}
