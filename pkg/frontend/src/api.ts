import type {
  ApiErrorPayload,
  ModelPayload,
  QueryPayload,
  RiskRow,
  ScenarioInfo,
} from './types.js';

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** A service error that still carries the engine's machine-readable code. */
export class ApiError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(status: number, payload: ApiErrorPayload) {
    super(payload.message);
    this.code = payload.code;
    this.status = status;
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let payload: ApiErrorPayload = { code: 'error', message: `HTTP ${response.status}` };
  try {
    payload = (await response.json()) as ApiErrorPayload;
  } catch {
    // non-JSON error body; keep the fallback
  }
  return new ApiError(response.status, payload);
}

/** Thin typed client for the query service; the console's only backend. */
export class ApiClient {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(base = '', fetchImpl?: FetchLike) {
    this.base = base.replace(/\/$/, '');
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  private async get<T>(path: string): Promise<T> {
    const response = await this.fetchImpl(this.base + path);
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const response = await this.fetchImpl(this.base + path, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    });
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  health(): Promise<{ status: string }> {
    return this.get('/api/health');
  }

  model(): Promise<ModelPayload> {
    return this.get('/api/model');
  }

  scenarios(): Promise<{ scenarios: ScenarioInfo[] }> {
    return this.get('/api/scenarios');
  }

  causes(aspect: string): Promise<{ aspect: string; causes: string[] }> {
    return this.get(`/api/aspects/${aspect}/causes`);
  }

  query(evidence: Record<string, boolean>): Promise<QueryPayload> {
    return this.post('/api/query', { evidence });
  }

  risk(
    evidence: Record<string, boolean>,
    impacts?: Record<string, number>,
  ): Promise<{ ranking: RiskRow[] }> {
    const body: Record<string, unknown> = { evidence };
    if (impacts) body.impacts = impacts;
    return this.post('/api/risk', body);
  }
}
