/**
 * Typed fetch client for the detection service JSON API.
 */

import type {
  DatasetMeta,
  DetectMode,
  DetectResponse,
  DetectionParams,
  SweepKind,
  SweepResponse,
  TemporalResponse,
  TemporalSpec,
} from './types.js';

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: unknown,
  ) {
    super(`HTTP ${status}: ${summarizeDetail(detail)}`);
  }

  /** Field names mentioned in a 422 validation detail, when present. */
  fieldErrors(): Record<string, string> {
    const errors: Record<string, string> = {};
    if (Array.isArray(this.detail)) {
      for (const item of this.detail as Array<Record<string, unknown>>) {
        const loc = item.loc;
        const field = Array.isArray(loc) ? String(loc[loc.length - 1]) : 'request';
        errors[field] = String(item.msg ?? item.error ?? 'invalid');
      }
    }
    return errors;
  }
}

function summarizeDetail(detail: unknown): string {
  if (typeof detail === 'string') return detail;
  try {
    return JSON.stringify(detail).slice(0, 300);
  } catch {
    return String(detail);
  }
}

/** The service surface the UI depends on (implemented by ApiClient). */
export interface DetectionApi {
  health(): Promise<{ status: string }>;
  uploadDataset(csv: string): Promise<DatasetMeta>;
  simulateDataset(placement?: 'deterministic' | 'uniform', seed?: number): Promise<DatasetMeta>;
  datasetMetadata(id: string): Promise<DatasetMeta>;
  detect(
    datasetId: string,
    mode: DetectMode,
    params: DetectionParams,
    options?: { aggregate?: boolean; offset?: number; limit?: number },
  ): Promise<DetectResponse>;
  sweep(
    datasetId: string,
    kind: SweepKind,
    params: DetectionParams,
    options?: { grid?: number[]; ratio?: number; withinSpans?: number[] },
  ): Promise<SweepResponse>;
  temporal(datasetId: string, spec: TemporalSpec, params: DetectionParams): Promise<TemporalResponse>;
}

export class ApiClient implements DetectionApi {
  constructor(public baseUrl: string = '') {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`, init);
    let body: unknown = null;
    const text = await response.text();
    if (text) {
      try {
        body = JSON.parse(text);
      } catch {
        body = text;
      }
    }
    if (!response.ok) {
      const detail =
        body && typeof body === 'object' && 'detail' in (body as object)
          ? (body as { detail: unknown }).detail
          : body;
      throw new ApiError(response.status, detail);
    }
    return body as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(payload),
    });
  }

  health(): Promise<{ status: string }> {
    return this.request('/api/health');
  }

  uploadDataset(csv: string): Promise<DatasetMeta> {
    return this.request('/api/datasets', {
      method: 'POST',
      headers: { 'content-type': 'text/csv' },
      body: csv,
    });
  }

  simulateDataset(placement: 'deterministic' | 'uniform' = 'deterministic', seed = 0): Promise<DatasetMeta> {
    return this.post('/api/datasets/simulate', { placement, seed });
  }

  datasetMetadata(id: string): Promise<DatasetMeta> {
    return this.request(`/api/datasets/${encodeURIComponent(id)}`);
  }

  detect(
    datasetId: string,
    mode: DetectMode,
    params: DetectionParams,
    options: { aggregate?: boolean; offset?: number; limit?: number } = {},
  ): Promise<DetectResponse> {
    return this.post('/api/detect', {
      dataset_id: datasetId,
      mode,
      params,
      aggregate: options.aggregate ?? false,
      offset: options.offset ?? 0,
      limit: options.limit ?? 1000,
    });
  }

  sweep(
    datasetId: string,
    kind: SweepKind,
    params: DetectionParams,
    options: { grid?: number[]; ratio?: number; withinSpans?: number[] } = {},
  ): Promise<SweepResponse> {
    return this.post('/api/sweep', {
      dataset_id: datasetId,
      kind,
      params,
      grid: options.grid ?? null,
      ratio: options.ratio ?? 2,
      within_spans: options.withinSpans ?? null,
    });
  }

  temporal(datasetId: string, spec: TemporalSpec, params: DetectionParams): Promise<TemporalResponse> {
    return this.post('/api/temporal', {
      dataset_id: datasetId,
      unit: spec.unit,
      span: spec.span,
      statistic: spec.statistic,
      params,
    });
  }
}
