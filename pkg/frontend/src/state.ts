import type { QueryPayload, TriState } from './types.js';

/**
 * Evidence store. Each aspect is unset, compromised (observed exploited)
 * or secure (verified not exploited); only set aspects enter the query
 * payload, mirroring the service's evidence contract exactly.
 */
export class EvidenceState {
  private readonly states = new Map<string, TriState>();

  get(aspect: string): TriState {
    return this.states.get(aspect) ?? 'unset';
  }

  set(aspect: string, state: TriState): void {
    if (state === 'unset') {
      this.states.delete(aspect);
    } else {
      this.states.set(aspect, state);
    }
  }

  /** unset -> compromised -> secure -> unset */
  cycle(aspect: string): TriState {
    const next: Record<TriState, TriState> =
      { unset: 'compromised', compromised: 'secure', secure: 'unset' };
    const state = next[this.get(aspect)];
    this.set(aspect, state);
    return state;
  }

  clear(): void {
    this.states.clear();
  }

  /** Replace the whole evidence set (scenario presets). */
  load(evidence: Record<string, boolean>): void {
    this.states.clear();
    for (const [aspect, value] of Object.entries(evidence)) {
      this.states.set(aspect, value ? 'compromised' : 'secure');
    }
  }

  isEmpty(): boolean {
    return this.states.size === 0;
  }

  setAspects(): string[] {
    return [...this.states.keys()].sort(byAspectId);
  }

  /** The request payload: true for compromised, false for secure. */
  payload(): Record<string, boolean> {
    const out: Record<string, boolean> = {};
    for (const aspect of this.setAspects()) {
      out[aspect] = this.states.get(aspect) === 'compromised';
    }
    return out;
  }
}

export function byAspectId(a: string, b: string): number {
  const na = Number(a.replace(/^[A-Z]+/, ''));
  const nb = Number(b.replace(/^[A-Z]+/, ''));
  return na - nb || a.localeCompare(b);
}

export interface AspectView {
  id: string;
  probability: number;
  baseline: number;
  delta: number;
  /** Service value rendered to its served precision; never recomputed. */
  badge: string;
  deltaBadge: string;
  trend: 'up' | 'down' | 'flat';
  evidence: TriState;
}

/** Deltas smaller than this render as flat (no highlight). */
export const DELTA_THRESHOLD = 0.01;

export function formatProbability(value: number): string {
  return value.toFixed(3);
}

export function formatDelta(value: number): string {
  const text = value.toFixed(3);
  return value > 0 ? `+${text}` : text;
}

/**
 * Join the current response with the baseline response per aspect. Both
 * inputs are raw service payloads; this only pairs and formats them.
 */
export function buildViews(
  current: QueryPayload,
  baseline: QueryPayload,
  evidence: EvidenceState,
): Map<string, AspectView> {
  const views = new Map<string, AspectView>();
  for (const [aspect, probability] of Object.entries(current.probabilities)) {
    const base = baseline.probabilities[aspect] ?? probability;
    const delta = probability - base;
    let trend: AspectView['trend'] = 'flat';
    if (delta > DELTA_THRESHOLD) trend = 'up';
    else if (delta < -DELTA_THRESHOLD) trend = 'down';
    views.set(aspect, {
      id: aspect,
      probability,
      baseline: base,
      delta,
      badge: formatProbability(probability),
      deltaBadge: formatDelta(delta),
      trend,
      evidence: evidence.get(aspect),
    });
  }
  return views;
}

/**
 * Coalesces rapid toggles: at most one request in flight, and a burst of
 * changes collapses to a single trailing query for the latest evidence.
 */
export class QueryQueue {
  private inFlight = false;
  private pending: Record<string, boolean> | null = null;

  constructor(
    private readonly run: (evidence: Record<string, boolean>) => Promise<void>,
  ) {}

  async submit(evidence: Record<string, boolean>): Promise<void> {
    if (this.inFlight) {
      this.pending = evidence;
      return;
    }
    this.inFlight = true;
    try {
      await this.run(evidence);
    } finally {
      this.inFlight = false;
    }
    if (this.pending) {
      const next = this.pending;
      this.pending = null;
      await this.submit(next);
    }
  }

  get busy(): boolean {
    return this.inFlight;
  }
}
