import { describe, expect, it } from 'vitest';

import { DEFAULT_PARAMS } from '../src/types.js';
import {
  isValid,
  normalizeIcdCode,
  parseGrid,
  parseIcdList,
  validateParams,
} from '../src/validation.js';

describe('normalizeIcdCode', () => {
  it('uppercases and trims valid codes', () => {
    expect(normalizeIcdCode(' f063 ')).toBe('F063');
    expect(normalizeIcdCode('T4041')).toBe('T4041');
  });

  it('rejects codes with a decimal point or bad length', () => {
    expect(normalizeIcdCode('F0.63')).toBeNull();
    expect(normalizeIcdCode('F0')).toBeNull();
    expect(normalizeIcdCode('F06312')).toBeNull();
    expect(normalizeIcdCode('')).toBeNull();
  });
});

describe('parseIcdList', () => {
  it('splits on commas and whitespace, deduplicates', () => {
    const { codes, invalid } = parseIcdList('F060, f063 F060,T4041');
    expect(codes).toEqual(['F060', 'F063', 'T4041']);
    expect(invalid).toEqual([]);
  });

  it('reports invalid tokens', () => {
    const { codes, invalid } = parseIcdList('F060, F0.63');
    expect(codes).toEqual(['F060']);
    expect(invalid).toEqual(['F0.63']);
  });
});

describe('validateParams', () => {
  it('accepts the defaults', () => {
    expect(validateParams(DEFAULT_PARAMS)).toEqual({});
    expect(isValid(validateParams(DEFAULT_PARAMS))).toBe(true);
  });

  it('blocks a zero visit count with a field-level message', () => {
    const errors = validateParams({ ...DEFAULT_PARAMS, n_mhh: 0 });
    expect(errors.n_mhh).toMatch(/≥ 1/);
    expect(isValid(errors)).toBe(false);
  });

  it('blocks negative and fractional spans', () => {
    expect(validateParams({ ...DEFAULT_PARAMS, t_mh: -1 }).t_mh).toBeDefined();
    expect(validateParams({ ...DEFAULT_PARAMS, t_su: 1.5 }).t_su).toBeDefined();
    expect(validateParams({ ...DEFAULT_PARAMS, t_mhsu: 0 }).t_mhsu).toBeDefined();
  });

  it('requires non-empty, well-formed code lists', () => {
    expect(validateParams({ ...DEFAULT_PARAMS, icd_mh: [] }).icd_mh).toMatch(/at least one/);
    expect(validateParams({ ...DEFAULT_PARAMS, icd_su: ['F1.00'] }).icd_su).toMatch(/F1\.00/);
  });

  it('allows same-day spans (t = 0)', () => {
    expect(validateParams({ ...DEFAULT_PARAMS, t_mh: 0, t_su: 0 })).toEqual({});
  });
});

describe('parseGrid', () => {
  it('parses comma-separated integers', () => {
    expect(parseGrid('1,2,3')).toEqual({ values: [1, 2, 3], error: null });
    expect(parseGrid(' 0, 7 14 ')).toEqual({ values: [0, 7, 14], error: null });
  });

  it('rejects non-integers and empty grids', () => {
    expect(parseGrid('1,x').error).toMatch(/x/);
    expect(parseGrid('').error).toMatch(/empty/);
  });
});
