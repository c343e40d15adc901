/**
 * Typed client for the session service JSON API.
 * All strategy math lives on the server; this module only moves JSON.
 */

export type WheelName = 'european' | 'american';
export type Phase = 'warmup' | 'probing' | 'confident' | 'stopped';
export type Verdict = 'above-critical' | 'below-critical' | 'undecided';
export type Family = 'uniform' | 'gaussian' | 'linear';

export interface SessionConfig {
  n: number;
  bet_unit: number;
  wheel: WheelName;
}

export interface Recommendation {
  bets: number[];
  stake_per_bet: number;
  rationale: string;
}

export interface SessionState {
  id: string;
  config: SessionConfig;
  sequence: number;
  spins: number;
  window: number[];
  bankroll: number;
  initial_bankroll: number;
  phase: Phase;
  settled_spins: number;
  recommendation: Recommendation;
}

export interface DecisionReport {
  omega: number;
  std_error: number;
  settled_spins: number;
  spins_observed: number;
  verdict: Verdict;
  phase: Phase;
}

export interface SimulationParams {
  family: Family;
  param: number;
  n: number;
  trials: number;
  seed: number;
  wheel?: WheelName;
}

export interface SimulationResult {
  omega: number;
  std_error: number;
  trials: number;
  estimator: string;
  bunching: number;
  family: Family;
  param: number;
  n: number;
  seed: number;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

const defaultFetch: FetchLike = (input, init) => globalThis.fetch(input, init);

/** Non-2xx responses carry {"error": {code, message}}; surface them as ApiError. */
const raiseFor = async (resp: Response): Promise<void> => {
  if (resp.ok) return;
  let code = `http-${resp.status}`;
  let message = resp.statusText || `request failed with ${resp.status}`;
  try {
    const body = await resp.json();
    if (body && body.error) {
      code = String(body.error.code ?? code);
      message = String(body.error.message ?? message);
    }
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(resp.status, code, message);
};

export class ServiceClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: FetchLike = defaultFetch
  ) {}

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(this.baseUrl + path, {
      headers: { 'content-type': 'application/json' },
      ...init,
    });
    await raiseFor(resp);
    return (await resp.json()) as T;
  }

  createSession(body: {
    n: number;
    bet_unit: number;
    bankroll: number;
    wheel: WheelName;
  }): Promise<SessionState> {
    return this.json('/sessions', { method: 'POST', body: JSON.stringify(body) });
  }

  getState(id: string): Promise<SessionState> {
    return this.json(`/sessions/${id}`);
  }

  postSpin(id: string, outcome: number, sequence: number): Promise<SessionState> {
    return this.json(`/sessions/${id}/spins`, {
      method: 'POST',
      body: JSON.stringify({ outcome, sequence }),
    });
  }

  getDecision(id: string): Promise<DecisionReport> {
    return this.json(`/sessions/${id}/decision`);
  }

  /** The raw append-only spin log, byte-for-byte as the CLI reads it. */
  async getLog(id: string): Promise<string> {
    const resp = await this.fetchFn(`${this.baseUrl}/sessions/${id}/log`);
    await raiseFor(resp);
    return resp.text();
  }

  simulate(params: SimulationParams, signal?: AbortSignal): Promise<SimulationResult> {
    return this.json('/simulate', {
      method: 'POST',
      body: JSON.stringify(params),
      signal,
    });
  }
}
