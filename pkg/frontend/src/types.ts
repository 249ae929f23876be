/**
 * Payload types mirroring the detection service's JSON API.
 */

export interface DetectionParams {
  n_mhh: number;
  n_mhp: number;
  n_suh: number;
  n_sup: number;
  t_mh: number;
  t_su: number;
  t_mhsu: number;
  icd_mh: string[];
  icd_su: string[];
  force: boolean;
}

export const DEFAULT_PARAMS: DetectionParams = {
  n_mhh: 1,
  n_mhp: 1,
  n_suh: 1,
  n_sup: 1,
  t_mh: 60,
  t_su: 60,
  t_mhsu: 365,
  icd_mh: ['F060', 'F063', 'F064', 'F067'],
  icd_su: ['F100', 'T4041', 'F120', 'F140'],
  force: false,
};

export type DetectMode = 'mh' | 'su' | 'basic' | 'broad';
export type SweepKind = 'within-span' | 'visit-count' | 'concurrent-span';

export interface DatasetMeta {
  id: string;
  row_count: number;
  client_count: number;
  min_date: string | null;
  max_date: string | null;
  created_at: string;
  warnings: string[];
}

export interface StatusRow {
  client_id: string;
  mh_earliest: string | null;
  mh_latest: string | null;
  mh_status: string | null;
  su_earliest: string | null;
  su_latest: string | null;
  su_status: string | null;
  mhsu_status: string | null;
  window: number | null;
}

export interface Summary {
  row_count: number;
  mh_count: number;
  mh_proportion: string;
  su_count: number;
  su_proportion: string;
  mhsu_count: number;
  mhsu_proportion: string;
}

export interface DetectResponse {
  request: { params: DetectionParams; mode: DetectMode; [key: string]: unknown };
  total_rows: number;
  offset: number;
  limit: number;
  rows: StatusRow[];
  summary: Summary;
  compute_ms: number;
}

export interface SweepPoint {
  x: number;
  mh: number | null;
  su: number | null;
  mhsu: number;
}

export interface SweepSeries {
  kind: SweepKind;
  label: string;
  points: SweepPoint[];
}

export interface SweepResponse {
  series: SweepSeries[];
  request?: { params: DetectionParams; [key: string]: unknown };
  compute_ms?: number;
}

export interface TemporalBucket {
  bucket: string;
  start: string;
  end: string;
  active_clients: number;
  mh: number;
  su: number;
  mhsu: number;
  mh_rate: string;
  su_rate: string;
  mhsu_rate: string;
}

export interface TemporalResponse {
  unit: string;
  span: string;
  statistic: string;
  buckets: TemporalBucket[];
  request?: unknown;
  compute_ms?: number;
}

export interface TemporalSpec {
  unit: 'day' | 'week' | 'month' | 'quarter' | 'year';
  span: 'week' | 'month' | 'quarter' | 'year' | 'decade';
  statistic: 'frequency' | 'rate';
}

/** A sweep result kept for side-by-side comparison, with its exact parameters. */
export interface PinnedSweep {
  label: string;
  kind: SweepKind;
  series: SweepSeries[];
  params: DetectionParams;
  pinnedAt: string;
}
