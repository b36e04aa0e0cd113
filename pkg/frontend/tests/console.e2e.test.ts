// End-to-end: the console drives the real query service (spawned from the
// Python package) through a recording fetch, and every number on screen is
// checked against the intercepted response field it came from.

import { spawn, type ChildProcess } from 'node:child_process';
import { mkdtempSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { JSDOM } from 'jsdom';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { ApiClient, type FetchLike } from '../src/api.js';
import { Console } from '../src/console.js';

interface Recorded {
  url: string;
  method: string;
  request: unknown;
  response: unknown;
  status: number;
}

function recordingFetch(log: Recorded[]): FetchLike {
  return async (input, init) => {
    const response = await fetch(input, init);
    const text = await response.clone().text();
    log.push({
      url: input.toString(),
      method: init?.method ?? 'GET',
      request: init?.body ? JSON.parse(init.body as string) : null,
      response: text ? JSON.parse(text) : null,
      status: response.status,
    });
    return response;
  };
}

function startService(args: string[]): Promise<{ proc: ChildProcess; base: string }> {
  return new Promise((resolve, reject) => {
    const proc = spawn('python3', ['-m', 'bsag.cli', 'serve', ...args, '--port', '0'], {
      stdio: ['ignore', 'ignore', 'pipe'],
    });
    let banner = '';
    const timer = setTimeout(
      () => reject(new Error(`service did not start: ${banner}`)), 15000);
    proc.stderr!.on('data', (chunk: Buffer) => {
      banner += chunk.toString();
      const match = banner.match(/serving on http:\/\/[^:]+:(\d+)/);
      if (match) {
        clearTimeout(timer);
        resolve({ proc, base: `http://127.0.0.1:${match[1]}` });
      }
    });
    proc.on('exit', (code) => {
      clearTimeout(timer);
      reject(new Error(`service exited early (${code}): ${banner}`));
    });
  });
}

async function until(check: () => boolean, timeoutMs = 10000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (!check()) {
    if (Date.now() > deadline) throw new Error('condition never became true');
    await new Promise((resolve) => setTimeout(resolve, 15));
  }
}

function lastQuery(log: Recorded[]): Recorded {
  const queries = log.filter((r) => r.url.endsWith('/api/query'));
  return queries[queries.length - 1];
}

describe('what-if console against the live service', () => {
  let proc: ChildProcess;
  let base: string;
  let log: Recorded[];
  let app: Console;
  let dom: JSDOM;

  beforeAll(async () => {
    ({ proc, base } = await startService(['builtin']));
    dom = new JSDOM('<!doctype html><div id="console"></div>');
    log = [];
    const root = dom.window.document.getElementById('console') as HTMLElement;
    app = new Console(new ApiClient(base, recordingFetch(log)), root);
    await app.load();
  });

  afterAll(() => {
    proc?.kill();
  });

  it('renders all thirty aspects with kind shapes and category colors', () => {
    const doc = dom.window.document;
    expect(doc.querySelectorAll('[data-node]').length).toBe(30);
    expect(doc.querySelectorAll('[data-shape="ellipse"]').length).toBe(4);
    expect(doc.querySelectorAll('[data-shape="rect"]').length).toBe(26);
    // nine access-control nodes share the yellow fill
    const yellow = [...doc.querySelectorAll('[data-shape]')]
      .filter((shape) => shape.getAttribute('fill') === '#e7c75c');
    expect(yellow.length).toBe(9);
    expect(doc.querySelectorAll('[data-edge]').length).toBe(36);
  });

  it('shows the baseline from the service response', () => {
    expect(app.badgeText('A18')).toBe('0.680');
    const baseline = log.find((r) => r.url.endsWith('/api/query'))!;
    const served = (baseline.response as { probabilities: Record<string, number> })
      .probabilities;
    expect(app.view('A18')!.probability).toBe(served.A18);
  });

  it('hover tooltip lists the direct causes of A5', () => {
    const tip = dom.window.document.querySelector('[data-tip="A5"]')!;
    expect(tip.textContent).toContain('direct causes: A6, A7');
  });

  it('toggling A25 to compromised displays 0.695 / 0.804 for A27 / A28', async () => {
    const node = dom.window.document.querySelector('[data-node="A25"]')!;
    node.dispatchEvent(new dom.window.MouseEvent('click'));
    await until(() => app.settled && app.badgeText('A25') === '1.000');

    expect(app.badgeText('A27')).toBe('0.695');
    expect(app.badgeText('A28')).toBe('0.804');

    const intercepted = lastQuery(log);
    expect(intercepted.request).toEqual({ evidence: { A25: true } });
    const served = (intercepted.response as { probabilities: Record<string, number> })
      .probabilities;
    expect(app.view('A27')!.probability).toBe(served.A27);
    expect(app.view('A28')!.probability).toBe(served.A28);
    expect(served.A27).toBe(0.695);
    expect(served.A28).toBe(0.804);

    // evidence pin and delta coloring
    expect(dom.window.document.querySelector('[data-pin="A25"]')!.textContent)
      .toContain('compromised');
    expect(app.view('A18')!.trend).toBe('up');
  });

  it('clearing evidence restores the baseline (A18 back to 0.680)', async () => {
    const clear = dom.window.document.querySelector('[data-role="clear"]')!;
    clear.dispatchEvent(new dom.window.MouseEvent('click'));
    await until(() => app.settled && app.badgeText('A18') === '0.680');

    expect(lastQuery(log).request).toEqual({ evidence: {} });
    expect(app.view('A18')!.trend).toBe('flat');
    expect(app.evidence.isEmpty()).toBe(true);
  });

  it('every badge equals its service response field (no recomputation)', () => {
    const served = (lastQuery(log).response as {
      probabilities: Record<string, number>;
    }).probabilities;
    for (const [aspect, value] of Object.entries(served)) {
      expect(app.badgeText(aspect)).toBe(value.toFixed(3));
      expect(app.view(aspect)!.probability).toBe(value);
    }
  });

  it('scenario presets send evidence identical to the bundled definitions', async () => {
    const scenarios = (log.find((r) => r.url.endsWith('/api/scenarios'))!
      .response as { scenarios: Array<{ name: string; evidence: Record<string, boolean> }> })
      .scenarios;
    const byName = Object.fromEntries(scenarios.map((s) => [s.name, s.evidence]));

    const doc = dom.window.document;
    doc.querySelector('[data-scenario="scenario2"]')!
      .dispatchEvent(new dom.window.MouseEvent('click'));
    await until(() => app.settled && app.badgeText('A25') === '1.000');
    expect(lastQuery(log).request).toEqual({ evidence: byName.scenario2 });

    doc.querySelector('[data-scenario="scenario3"]')!
      .dispatchEvent(new dom.window.MouseEvent('click'));
    await until(() => app.settled && app.badgeText('A23') === '0.000');
    expect(lastQuery(log).request).toEqual({ evidence: byName.scenario3 });
    expect(app.badgeText('A29')).toBe('0.258');

    await app.clearEvidence();
    await until(() => app.settled);
  });

  it('toggle on and off reproduces the exact baseline payload', async () => {
    const before = lastQuery(log).response;
    await app.setEvidence('A25', 'compromised');
    await app.setEvidence('A25', 'unset');
    await until(() => app.settled);
    expect(lastQuery(log).request).toEqual({ evidence: {} });
    expect(lastQuery(log).response).toEqual(before);
  });

  it('impossible evidence shows an inline error and keeps prior state', async () => {
    await app.setEvidence('A27', 'secure');
    await app.setEvidence('A28', 'secure');
    await until(() => app.settled);
    const healthyBadge = app.badgeText('A25');

    await app.setEvidence('A25', 'compromised');
    await until(() => app.settled);
    expect(app.bannerText()).toContain('impossible');
    expect(app.badgeText('A25')).toBe(healthyBadge);

    await app.clearEvidence();
    await until(() => app.settled);
    expect(app.bannerText()).toBe('');
  });

  it('zero-impact preset renders every risk as 0.000', async () => {
    await app.setImpactPreset('zero');
    const rows = app.riskRows();
    expect(rows.length).toBe(30);
    expect(rows.every((row) => row.risk === 0 && row.impact === 0)).toBe(true);
    const doc = dom.window.document;
    const cells = doc.querySelectorAll('.risk-value');
    expect([...cells].every((cell) => cell.textContent === '0.000')).toBe(true);
    await app.setImpactPreset('unit');
  });

  it('risk panel ranks A18 first and focuses the causal chain on select', async () => {
    const rows = app.riskRows();
    expect(rows[0].aspect).toBe('A18');
    const served = log.filter((r) => r.url.endsWith('/api/risk')).pop()!;
    expect((served.response as { ranking: Array<{ aspect: string }> }).ranking[0].aspect)
      .toBe('A18');

    const doc = dom.window.document;
    const a15row = doc.querySelector('[data-risk-row="A15"]')!;
    a15row.dispatchEvent(new dom.window.MouseEvent('click'));
    await until(() => app.focused().size > 0);
    const chain = app.focused();
    for (const expected of ['A15', 'A16', 'A14', 'A18']) {
      expect(chain.has(expected)).toBe(true);
    }
    const focusedNodes = doc.querySelectorAll('.focused');
    expect(focusedNodes.length).toBe(chain.size);
  });
});

describe('degenerate model', () => {
  it('shows an empty-state message for a model with no aspects', async () => {
    const dir = mkdtempSync(join(tmpdir(), 'bsag-empty-'));
    const path = join(dir, 'empty.json');
    writeFileSync(path, JSON.stringify({ aspects: [], edges: [] }));
    const { proc, base } = await startService([path]);
    try {
      const dom2 = new JSDOM('<!doctype html><div id="console"></div>');
      const root = dom2.window.document.getElementById('console') as HTMLElement;
      const app2 = new Console(new ApiClient(base, (i, init) => fetch(i, init)), root);
      await app2.load();
      expect(root.textContent).toContain('no aspects');
    } finally {
      proc.kill();
    }
  });

  it('surfaces a connection-failure banner with retry when unreachable', async () => {
    const dom3 = new JSDOM('<!doctype html><div id="console"></div>');
    const root = dom3.window.document.getElementById('console') as HTMLElement;
    const app3 = new Console(
      new ApiClient('http://127.0.0.1:1', (i, init) => fetch(i, init)), root);
    await app3.load();
    expect(root.textContent).toContain('cannot reach the query service');
  });
});
