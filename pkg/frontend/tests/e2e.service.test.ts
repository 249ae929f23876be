/**
 * End-to-end flow against the real Python service: generate the
 * bundled sample, run default-parameter detection, and run the
 * visit-count sweep, asserting the values the UI's summary cards and
 * charts display.
 */
import { spawn, type ChildProcess } from 'node:child_process';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api.js';
import { ExplorationStore } from '../src/state.js';
import { sweepLines } from '../src/charts.js';

const PORT = 8765 + Math.floor(Math.random() * 200);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;

async function waitForHealth(timeoutMs = 30_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/api/health`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error('service did not become healthy in time');
}

beforeAll(async () => {
  server = spawn('python3', ['-m', 'dddm.cli', 'serve', '--port', String(PORT)], {
    stdio: 'ignore',
  });
  await waitForHealth();
}, 40_000);

afterAll(() => {
  server?.kill('SIGTERM');
});

describe('exploration flows against the live service', () => {
  it('generates the sample and shows default-run summary cards of 125/125/100', async () => {
    const store = new ExplorationStore(new ApiClient(BASE));
    await store.generateSample();
    const dataset = store.getState().dataset;
    expect(dataset?.client_count).toBe(200);
    expect(dataset?.row_count).toBe(1665);

    await store.runDetection('basic');
    const summary = store.getState().detection?.summary;
    expect(summary?.mh_count).toBe(125);
    expect(summary?.su_count).toBe(125);
    expect(summary?.mhsu_count).toBe(100);
    expect(summary?.mh_proportion).toBe('0.625');
    expect(summary?.su_proportion).toBe('0.625');
    expect(summary?.mhsu_proportion).toBe('0.500');
    // per-patient table rows carry the date columns
    const first = store.getState().detection!.rows[0];
    expect(first.client_id).toBe('001');
    expect(first.mh_earliest).toBe('2024-01-08');
  });

  it('blocks n_mhh=0 before any request reaches the service', async () => {
    const store = new ExplorationStore(new ApiClient(BASE));
    await store.generateSample();
    store.setParam('n_mhh', 0);
    await store.runDetection('basic');
    expect(store.getState().fieldErrors.n_mhh).toBeDefined();
    expect(store.getState().detection).toBeNull();
  });

  it('runs and pins an 8-point visit-count sweep whose x=2 value is 90', async () => {
    const store = new ExplorationStore(new ApiClient(BASE));
    await store.generateSample();
    store.setParam('t_mh', 183);
    store.setParam('t_su', 183);
    await store.runSweep('visit-count', { grid: [1, 2, 3, 4, 5, 6, 7, 8] });
    store.pinLastSweep('ratio 1:2');

    const pinned = store.getState().pinned[0];
    expect(pinned.params.t_mh).toBe(183);
    const mhsuLine = sweepLines(pinned.series).find((l) => l.label === 'MHSU');
    expect(mhsuLine?.points).toHaveLength(8);
    expect(mhsuLine?.points.find((p) => p.x === 2)?.y).toBe(90);

    // a rerun under a different regime renders alongside with a distinct legend
    store.setParam('t_mh', 60);
    store.setParam('t_su', 60);
    await store.runSweep('visit-count', { grid: [1, 2, 3, 4, 5, 6, 7, 8] });
    const { comparisonLines } = await import('../src/charts.js');
    const labels = comparisonLines(store.getState().sweep!.series, store.getState().pinned).map(
      (l) => l.label,
    );
    expect(labels).toContain('MHSU');
    expect(labels).toContain('ratio 1:2: MHSU');
  });

  it('rejects an invalid span server-side with a 422 surfaced inline', async () => {
    const store = new ExplorationStore(new ApiClient(BASE));
    await store.generateSample();
    store.setParam('t_mhsu', 100); // dataset spans 354 days
    await store.runDetection('basic');
    expect(store.getState().panelError.detect).toMatch(/rejected|broad/i);
  });

  it('returns monthly buckets for the temporal panel', async () => {
    const store = new ExplorationStore(new ApiClient(BASE));
    await store.generateSample();
    store.setParam('n_mhp', 2);
    store.setParam('t_mh', 31);
    store.setParam('t_su', 31);
    store.setParam('t_mhsu', 31);
    await store.runTemporal();
    expect(store.getState().temporal?.buckets).toHaveLength(12);
  });
});
