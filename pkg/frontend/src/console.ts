import { ApiClient, ApiError } from './api.js';
import { DEFAULT_LAYOUT, layoutGraph, type NodePosition } from './layout.js';
import {
  EvidenceState,
  QueryQueue,
  buildViews,
  byAspectId,
  formatProbability,
  type AspectView,
} from './state.js';
import type { ModelPayload, QueryPayload, RiskRow, ScenarioInfo, TriState } from './types.js';

const SVG_NS = 'http://www.w3.org/2000/svg';

export type ImpactPreset = 'unit' | 'zero';

export const CATEGORY_COLORS: Record<string, string> = {
  data: '#7ac17a',
  standard: '#6fa8dc',
  access_control: '#e7c75c',
  loss: '#e06666',
  network: '#b7b7b7',
};

const NODE_W = 88;
const NODE_H = 40;

/**
 * The what-if console. Renders the dependency graph as SVG, keeps a
 * tri-state evidence set, and re-queries the service on every change;
 * all numbers shown come straight from service responses.
 */
export class Console {
  readonly evidence = new EvidenceState();

  private model: ModelPayload | null = null;
  private baseline: QueryPayload | null = null;
  private current: QueryPayload | null = null;
  private views = new Map<string, AspectView>();
  private positions = new Map<string, NodePosition>();
  private scenarios: ScenarioInfo[] = [];
  private ranking: RiskRow[] = [];
  private riskSort: keyof RiskRow = 'risk';
  private impactPreset: ImpactPreset = 'unit';
  private focusedChain = new Set<string>();
  private queue = new QueryQueue((evidence) => this.runQuery(evidence));

  constructor(
    private readonly api: ApiClient,
    private readonly root: HTMLElement,
    private readonly doc: Document = root.ownerDocument,
  ) {}

  /** Fetch the model, render the graph, and take the no-evidence baseline. */
  async load(): Promise<void> {
    this.clearBanner();
    try {
      this.model = await this.api.model();
      this.scenarios = (await this.api.scenarios()).scenarios;
      this.baseline = await this.api.query({});
      this.current = this.baseline;
      this.ranking = (await this.api.risk({})).ranking;
    } catch (error) {
      this.showBanner(errorText(error), () => void this.load());
      return;
    }
    if (!this.model.aspects.length) {
      this.root.textContent = 'The model document declares no aspects.';
      return;
    }
    this.positions = layoutGraph(
      this.model.aspects.map((a) => a.id), this.model.edges, DEFAULT_LAYOUT);
    this.renderShell();
    this.refreshViews();
  }

  /** Cycle one aspect through unset -> compromised -> secure -> unset. */
  toggle(aspect: string): Promise<void> {
    this.evidence.cycle(aspect);
    return this.submit();
  }

  setEvidence(aspect: string, state: TriState): Promise<void> {
    this.evidence.set(aspect, state);
    return this.submit();
  }

  clearEvidence(): Promise<void> {
    this.evidence.clear();
    return this.submit();
  }

  applyScenario(name: string): Promise<void> {
    const scenario = this.scenarios.find((s) => s.name === name);
    if (!scenario) return Promise.resolve();
    this.evidence.load(scenario.evidence);
    return this.submit();
  }

  /** Switch the risk table's impact weighting and re-rank. */
  async setImpactPreset(preset: ImpactPreset): Promise<void> {
    this.impactPreset = preset;
    try {
      this.ranking = (await this.api.risk(this.evidence.payload(),
                                          this.impactTable())).ranking;
    } catch (error) {
      this.showBanner(errorText(error), null);
      return;
    }
    this.renderRiskPanel();
  }

  private impactTable(): Record<string, number> | undefined {
    if (this.impactPreset === 'zero' && this.model) {
      return Object.fromEntries(this.model.aspects.map((a) => [a.id, 0]));
    }
    return undefined;
  }

  /** Highlight an aspect and its full causal chain (used by the risk panel). */
  async focusAspect(aspect: string): Promise<void> {
    try {
      const { causes } = await this.api.causes(aspect);
      this.focusedChain = new Set([aspect, ...causes]);
    } catch (error) {
      this.showBanner(errorText(error), null);
      return;
    }
    this.refreshViews();
  }

  private submit(): Promise<void> {
    return this.queue.submit(this.evidence.payload());
  }

  private async runQuery(evidence: Record<string, boolean>): Promise<void> {
    this.clearBanner();
    try {
      this.current = await this.api.query(evidence);
      this.ranking = (await this.api.risk(evidence, this.impactTable())).ranking;
    } catch (error) {
      if (error instanceof ApiError) {
        // e.g. impossible evidence: report inline, keep the prior state
        this.showBanner(errorText(error), null);
        return;
      }
      this.showBanner(errorText(error), () => void this.submit());
      return;
    }
    this.refreshViews();
  }

  // --- rendering ----------------------------------------------------------

  private renderShell(): void {
    const model = this.model!;
    this.root.textContent = '';

    const banner = el(this.doc, 'div', 'banner');
    banner.setAttribute('data-role', 'banner');
    banner.style.display = 'none';
    this.root.appendChild(banner);

    const toolbar = el(this.doc, 'div', 'toolbar');
    const clear = el(this.doc, 'button', 'clear-btn', 'Clear evidence');
    clear.setAttribute('data-role', 'clear');
    clear.addEventListener('click', () => void this.clearEvidence());
    toolbar.appendChild(clear);
    for (const scenario of this.scenarios) {
      const button = el(this.doc, 'button', 'scenario-btn', scenario.name);
      button.setAttribute('data-scenario', scenario.name);
      button.addEventListener('click', () => void this.applyScenario(scenario.name));
      toolbar.appendChild(button);
    }
    this.root.appendChild(toolbar);

    const svg = this.doc.createElementNS(SVG_NS, 'svg');
    svg.setAttribute('viewBox', `0 0 ${DEFAULT_LAYOUT.width} ${DEFAULT_LAYOUT.height}`);
    svg.setAttribute('data-role', 'graph');

    for (const edge of model.edges) {
      const from = this.positions.get(edge.source)!;
      const to = this.positions.get(edge.target)!;
      const line = this.doc.createElementNS(SVG_NS, 'line');
      line.setAttribute('x1', String(from.x));
      line.setAttribute('y1', String(from.y));
      line.setAttribute('x2', String(to.x));
      line.setAttribute('y2', String(to.y));
      line.setAttribute('class', 'edge');
      line.setAttribute('data-edge', `${edge.source}-${edge.target}`);
      const tip = this.doc.createElementNS(SVG_NS, 'title');
      tip.textContent = `${edge.rule ?? ''} ${edge.source} → ${edge.target}`.trim();
      line.appendChild(tip);
      svg.appendChild(line);
    }

    for (const aspect of model.aspects) {
      const position = this.positions.get(aspect.id)!;
      const group = this.doc.createElementNS(SVG_NS, 'g');
      group.setAttribute('class', 'node');
      group.setAttribute('data-node', aspect.id);
      group.setAttribute('transform', `translate(${position.x}, ${position.y})`);

      const fill = CATEGORY_COLORS[aspect.category] ?? '#cccccc';
      let shape;
      if (aspect.kind === 'state') {
        shape = this.doc.createElementNS(SVG_NS, 'ellipse');
        shape.setAttribute('rx', String(NODE_W / 2));
        shape.setAttribute('ry', String(NODE_H / 2));
      } else {
        shape = this.doc.createElementNS(SVG_NS, 'rect');
        shape.setAttribute('x', String(-NODE_W / 2));
        shape.setAttribute('y', String(-NODE_H / 2));
        shape.setAttribute('width', String(NODE_W));
        shape.setAttribute('height', String(NODE_H));
        shape.setAttribute('rx', '6');
      }
      shape.setAttribute('fill', fill);
      shape.setAttribute('data-shape', aspect.kind === 'state' ? 'ellipse' : 'rect');
      group.appendChild(shape);

      const tip = this.doc.createElementNS(SVG_NS, 'title');
      tip.setAttribute('data-tip', aspect.id);
      const parents = model.edges
        .filter((e) => e.target === aspect.id)
        .map((e) => e.source)
        .sort(byAspectId);
      tip.textContent = `${aspect.id} ${aspect.name}`
        + (aspect.description ? `\n${aspect.description}` : '')
        + (parents.length ? `\ndirect causes: ${parents.join(', ')}` : '\nentry point');
      group.appendChild(tip);

      const label = this.doc.createElementNS(SVG_NS, 'text');
      label.setAttribute('class', 'node-id');
      label.setAttribute('y', '-2');
      label.textContent = aspect.id;
      group.appendChild(label);

      const badge = this.doc.createElementNS(SVG_NS, 'text');
      badge.setAttribute('class', 'badge');
      badge.setAttribute('y', '14');
      badge.setAttribute('data-badge', aspect.id);
      group.appendChild(badge);

      const pin = this.doc.createElementNS(SVG_NS, 'text');
      pin.setAttribute('class', 'pin');
      pin.setAttribute('y', String(-NODE_H / 2 - 6));
      pin.setAttribute('data-pin', aspect.id);
      group.appendChild(pin);

      group.addEventListener('click', () => void this.toggle(aspect.id));
      svg.appendChild(group);
    }
    this.root.appendChild(svg);

    const panel = el(this.doc, 'div', 'risk-panel');
    panel.setAttribute('data-role', 'risk');
    this.root.appendChild(panel);
  }

  private refreshViews(): void {
    if (!this.model || !this.current || !this.baseline) return;
    this.views = buildViews(this.current, this.baseline, this.evidence);
    for (const view of this.views.values()) {
      const group = this.root.querySelector(`[data-node="${view.id}"]`);
      const badge = this.root.querySelector(`[data-badge="${view.id}"]`);
      const pin = this.root.querySelector(`[data-pin="${view.id}"]`);
      if (!group || !badge || !pin) continue;
      badge.textContent = view.badge;
      const classes = ['node', `trend-${view.trend}`];
      if (view.evidence !== 'unset') classes.push(`evidence-${view.evidence}`);
      if (this.focusedChain.has(view.id)) classes.push('focused');
      group.setAttribute('class', classes.join(' '));
      group.querySelector('[data-shape]')?.setAttribute(
        'stroke', view.trend === 'up' ? '#c0392b' : view.trend === 'down' ? '#1e8449' : '#444444');
      const tip = group.querySelector(`[data-tip="${view.id}"]`);
      if (tip) {
        const base = (tip.textContent ?? '').split('\nΔ')[0];
        tip.textContent = `${base}\nΔ vs baseline: ${view.deltaBadge}`;
      }
      pin.textContent = view.evidence === 'compromised' ? '● compromised'
        : view.evidence === 'secure' ? '○ secure' : '';
    }
    this.renderRiskPanel();
  }

  private renderRiskPanel(): void {
    const panel = this.root.querySelector('[data-role="risk"]');
    if (!panel) return;
    panel.textContent = '';
    const heading = el(this.doc, 'h2', 'risk-title', 'Risk ranking');
    panel.appendChild(heading);

    const preset = this.doc.createElement('select');
    preset.setAttribute('data-role', 'impact-preset');
    for (const option of ['unit', 'zero'] as const) {
      const entry = this.doc.createElement('option');
      entry.setAttribute('value', option);
      entry.textContent = option === 'unit' ? 'unit impacts' : 'zero impacts';
      if (option === this.impactPreset) entry.setAttribute('selected', 'selected');
      preset.appendChild(entry);
    }
    preset.addEventListener('change', () => {
      void this.setImpactPreset(preset.value as ImpactPreset);
    });
    panel.appendChild(preset);
    const table = el(this.doc, 'table', 'risk-table');
    const head = el(this.doc, 'tr', 'risk-head');
    for (const column of ['aspect', 'probability', 'impact', 'risk'] as const) {
      const cell = el(this.doc, 'th', 'risk-col', column);
      cell.setAttribute('data-sort', column);
      cell.addEventListener('click', () => {
        this.riskSort = column;
        this.renderRiskPanel();
      });
      head.appendChild(cell);
    }
    table.appendChild(head);

    const rows = [...this.ranking].sort((a, b) => {
      if (this.riskSort === 'aspect') return byAspectId(a.aspect, b.aspect);
      const diff = (b[this.riskSort] as number) - (a[this.riskSort] as number);
      return diff || byAspectId(a.aspect, b.aspect);
    });
    rows.forEach((row, index) => {
      const tr = el(this.doc, 'tr', index === 0 && this.riskSort === 'risk'
        ? 'risk-row top-risk' : 'risk-row');
      tr.setAttribute('data-risk-row', row.aspect);
      tr.appendChild(el(this.doc, 'td', 'risk-aspect', row.aspect));
      tr.appendChild(el(this.doc, 'td', 'risk-prob', formatProbability(row.probability)));
      tr.appendChild(el(this.doc, 'td', 'risk-impact', formatProbability(row.impact)));
      tr.appendChild(el(this.doc, 'td', 'risk-value', formatProbability(row.risk)));
      tr.addEventListener('click', () => void this.focusAspect(row.aspect));
      table.appendChild(tr);
    });
    panel.appendChild(table);
  }

  private showBanner(message: string, retry: (() => void) | null): void {
    const banner = this.root.querySelector('[data-role="banner"]') as HTMLElement | null;
    if (!banner) {
      this.root.textContent = message;
      return;
    }
    banner.textContent = message;
    if (retry) {
      const button = el(this.doc, 'button', 'retry-btn', 'Retry');
      button.addEventListener('click', retry);
      banner.appendChild(button);
    }
    banner.style.display = 'block';
  }

  private clearBanner(): void {
    const banner = this.root.querySelector('[data-role="banner"]') as HTMLElement | null;
    if (banner) {
      banner.textContent = '';
      banner.style.display = 'none';
    }
  }

  // --- test/introspection hooks -------------------------------------------

  badgeText(aspect: string): string {
    return this.root.querySelector(`[data-badge="${aspect}"]`)?.textContent ?? '';
  }

  view(aspect: string): AspectView | undefined {
    return this.views.get(aspect);
  }

  riskRows(): RiskRow[] {
    return [...this.ranking];
  }

  bannerText(): string {
    return this.root.querySelector('[data-role="banner"]')?.textContent ?? '';
  }

  focused(): Set<string> {
    return new Set(this.focusedChain);
  }

  get settled(): boolean {
    return !this.queue.busy;
  }
}

function el(doc: Document, tag: string, className: string, text?: string): HTMLElement {
  const node = doc.createElement(tag);
  node.setAttribute('class', className);
  if (text !== undefined) node.textContent = text;
  return node;
}

function errorText(error: unknown): string {
  if (error instanceof ApiError) return `service error (${error.code}): ${error.message}`;
  if (error instanceof Error) return `cannot reach the query service: ${error.message}`;
  return String(error);
}
