import { describe, expect, it } from 'vitest';

import {
  DELTA_THRESHOLD,
  EvidenceState,
  QueryQueue,
  buildViews,
  byAspectId,
  formatDelta,
  formatProbability,
} from '../src/state.js';
import type { QueryPayload } from '../src/types.js';

describe('EvidenceState', () => {
  it('starts unset and omits unset aspects from the payload', () => {
    const state = new EvidenceState();
    expect(state.get('A25')).toBe('unset');
    expect(state.payload()).toEqual({});
    expect(state.isEmpty()).toBe(true);
  });

  it('maps compromised to true and secure to false', () => {
    const state = new EvidenceState();
    state.set('A25', 'compromised');
    state.set('A23', 'secure');
    expect(state.payload()).toEqual({ A23: false, A25: true });
  });

  it('cycles unset -> compromised -> secure -> unset', () => {
    const state = new EvidenceState();
    expect(state.cycle('A25')).toBe('compromised');
    expect(state.cycle('A25')).toBe('secure');
    expect(state.cycle('A25')).toBe('unset');
    expect(state.payload()).toEqual({});
  });

  it('clear restores the exact empty payload', () => {
    const state = new EvidenceState();
    state.set('A25', 'compromised');
    state.set('A9', 'secure');
    state.clear();
    expect(state.payload()).toEqual({});
  });

  it('loads scenario evidence verbatim', () => {
    const state = new EvidenceState();
    state.set('A1', 'compromised');
    state.load({ A25: true });
    expect(state.payload()).toEqual({ A25: true });
    state.load({ A23: false });
    expect(state.payload()).toEqual({ A23: false });
  });

  it('sorts payload keys numerically', () => {
    const state = new EvidenceState();
    state.set('A10', 'compromised');
    state.set('A2', 'compromised');
    expect(Object.keys(state.payload())).toEqual(['A2', 'A10']);
  });
});

describe('byAspectId', () => {
  it('orders numerically, not lexically', () => {
    expect(['A10', 'A2', 'A1'].sort(byAspectId)).toEqual(['A1', 'A2', 'A10']);
  });
});

describe('formatting', () => {
  it('renders three fractional digits', () => {
    expect(formatProbability(0.68)).toBe('0.680');
    expect(formatProbability(1)).toBe('1.000');
  });

  it('signs deltas', () => {
    expect(formatDelta(0.317)).toBe('+0.317');
    expect(formatDelta(-0.525)).toBe('-0.525');
    expect(formatDelta(0)).toBe('0.000');
  });
});

describe('buildViews', () => {
  const baseline: QueryPayload = {
    probabilities: { A1: 0.5, A2: 0.2, A3: 0.4 },
    evidence: {},
  };

  it('pairs current values with baseline and grades the trend', () => {
    const current: QueryPayload = {
      probabilities: { A1: 0.9, A2: 0.2, A3: 0.395 },
      evidence: { A1: true },
    };
    const evidence = new EvidenceState();
    evidence.set('A1', 'compromised');
    const views = buildViews(current, baseline, evidence);

    expect(views.get('A1')).toMatchObject({
      badge: '0.900', trend: 'up', evidence: 'compromised',
    });
    expect(views.get('A2')!.trend).toBe('flat');
    // below the threshold: stays flat
    expect(Math.abs(views.get('A3')!.delta)).toBeLessThan(DELTA_THRESHOLD);
    expect(views.get('A3')!.trend).toBe('flat');
  });

  it('never recomputes: badge equals the served value formatted', () => {
    const current: QueryPayload = {
      probabilities: { A1: 0.695 }, evidence: {},
    };
    const views = buildViews(current, baseline, new EvidenceState());
    expect(views.get('A1')!.probability).toBe(0.695);
    expect(views.get('A1')!.badge).toBe('0.695');
  });
});

describe('QueryQueue', () => {
  it('coalesces a burst into first + latest', async () => {
    const seen: Array<Record<string, boolean>> = [];
    let release: (() => void) | null = null;
    const queue = new QueryQueue(async (evidence) => {
      seen.push(evidence);
      if (seen.length === 1) {
        await new Promise<void>((resolve) => { release = resolve; });
      }
    });

    const first = queue.submit({ A1: true });
    void queue.submit({ A1: true, A2: true });
    void queue.submit({ A1: true, A2: false });
    void queue.submit({ A3: true });
    expect(queue.busy).toBe(true);
    release!();
    await first;
    await new Promise((resolve) => setTimeout(resolve, 0));

    expect(seen).toEqual([{ A1: true }, { A3: true }]);
    expect(queue.busy).toBe(false);
  });

  it('runs sequential submissions one by one', async () => {
    const seen: Array<Record<string, boolean>> = [];
    const queue = new QueryQueue(async (evidence) => { seen.push(evidence); });
    await queue.submit({ A1: true });
    await queue.submit({});
    expect(seen).toEqual([{ A1: true }, {}]);
  });
});
