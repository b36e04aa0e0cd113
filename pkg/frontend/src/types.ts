// Payload shapes of the query service. The console never computes
// probabilities itself; everything displayed traces back to these fields.

export type AspectKind = 'state' | 'vulnerability';

export type Category = 'data' | 'access_control' | 'standard' | 'network' | 'loss';

export interface AspectInfo {
  id: string;
  name: string;
  kind: AspectKind;
  category: Category;
  description: string | null;
}

export interface EdgeInfo {
  source: string;
  target: string;
  kind: 'imply' | 'result' | 'lead';
  rule: string | null;
}

export interface ModelPayload {
  aspects: AspectInfo[];
  edges: EdgeInfo[];
  scores: Record<string, number>;
  origin: { id: string; prior: number } | null;
  categories: Record<string, { count: number; percentage: number }>;
  entry_points: string[];
}

export interface QueryPayload {
  probabilities: Record<string, number>;
  evidence: Record<string, boolean>;
}

export interface ScenarioInfo {
  name: string;
  evidence: Record<string, boolean>;
  has_reference: boolean;
}

export interface RiskRow {
  aspect: string;
  probability: number;
  impact: number;
  risk: number;
}

export interface ApiErrorPayload {
  code: string;
  message: string;
  details?: unknown;
}

/** Evidence tri-state: unset aspects are omitted from query payloads. */
export type TriState = 'unset' | 'compromised' | 'secure';
