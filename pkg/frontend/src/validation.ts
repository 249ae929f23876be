/**
 * Client-side parameter validation mirroring the service's invariants,
 * so bad submissions are blocked before any request is made.
 */

import type { DetectionParams } from './types.js';

const ICD_RE = /^[A-Z0-9]{3,5}$/;

export type FieldErrors = Partial<Record<keyof DetectionParams, string>>;

/** Normalize one diagnostic code; returns null when the shape is invalid. */
export function normalizeIcdCode(raw: string): string | null {
  const code = raw.trim().toUpperCase();
  return ICD_RE.test(code) ? code : null;
}

/** Split a comma/whitespace separated code list, reporting bad tokens. */
export function parseIcdList(raw: string): { codes: string[]; invalid: string[] } {
  const codes: string[] = [];
  const invalid: string[] = [];
  for (const token of raw.split(/[\s,]+/)) {
    if (!token) continue;
    const code = normalizeIcdCode(token);
    if (code === null) {
      invalid.push(token);
    } else if (!codes.includes(code)) {
      codes.push(code);
    }
  }
  return { codes, invalid };
}

const COUNT_FIELDS: (keyof DetectionParams)[] = ['n_mhh', 'n_mhp', 'n_suh', 'n_sup'];

export function validateParams(params: DetectionParams): FieldErrors {
  const errors: FieldErrors = {};
  for (const field of COUNT_FIELDS) {
    const value = params[field];
    if (!Number.isInteger(value) || (value as number) < 1) {
      errors[field] = 'must be an integer ≥ 1';
    }
  }
  for (const field of ['t_mh', 't_su'] as const) {
    if (!Number.isInteger(params[field]) || params[field] < 0) {
      errors[field] = 'must be an integer ≥ 0';
    }
  }
  if (!Number.isInteger(params.t_mhsu) || params.t_mhsu < 1) {
    errors.t_mhsu = 'must be an integer ≥ 1';
  }
  for (const field of ['icd_mh', 'icd_su'] as const) {
    const codes = params[field];
    if (codes.length === 0) {
      errors[field] = 'at least one diagnostic code is required';
      continue;
    }
    const bad = codes.filter((c) => normalizeIcdCode(c) === null);
    if (bad.length > 0) {
      errors[field] = `invalid code(s): ${bad.join(', ')}`;
    }
  }
  return errors;
}

export function isValid(errors: FieldErrors): boolean {
  return Object.keys(errors).length === 0;
}

/** Parse a comma-separated integer grid, e.g. "1,2,3" or "0,7,14". */
export function parseGrid(raw: string): { values: number[]; error: string | null } {
  const values: number[] = [];
  for (const token of raw.split(/[\s,]+/)) {
    if (!token) continue;
    const value = Number(token);
    if (!Number.isInteger(value)) {
      return { values: [], error: `not an integer: ${token}` };
    }
    values.push(value);
  }
  if (values.length === 0) {
    return { values: [], error: 'grid is empty' };
  }
  return { values, error: null };
}
