/**
 * What-if explorer: sweeps omega over N or over the bias parameter through
 * POST /simulate. Each result is cached under its full parameter manifest,
 * so revisiting a setting renders without another round trip. A timeout
 * mid-sweep returns the points gathered so far, flagged partial.
 */

import {
  Family,
  ServiceClient,
  SimulationParams,
  SimulationResult,
  WheelName,
} from './api.js';
import { ChartPoint } from './charts.js';

export type SweepAxis = 'n' | 'param';

export interface WhatIfForm {
  family: Family | '';
  param: string;
  n: string;
  trials: string;
  seed: string;
}

/** Submit stays disabled until every field parses. */
export const canSubmit = (form: WhatIfForm): boolean => {
  if (!form.family) return false;
  const param = Number(form.param);
  const n = Number(form.n);
  const trials = Number(form.trials);
  const seed = Number(form.seed);
  return (
    form.param.trim() !== '' &&
    Number.isFinite(param) &&
    param >= 0 &&
    Number.isInteger(n) &&
    n >= 1 &&
    Number.isInteger(trials) &&
    trials >= 1 &&
    Number.isInteger(seed)
  );
};

export const manifestKey = (params: SimulationParams): string =>
  JSON.stringify([
    params.family,
    params.param,
    params.n,
    params.trials,
    params.seed,
    params.wheel ?? 'european',
  ]);

export interface SweepResult {
  points: ChartPoint[];
  partial: boolean;
}

// DOMException is not an Error subclass on every runtime; match by name
const isTimeout = (err: unknown): boolean => {
  const name = (err as { name?: unknown } | null)?.name;
  return name === 'TimeoutError' || name === 'AbortError';
};

export class WhatIfPanel {
  private readonly cache = new Map<string, SimulationResult>();

  constructor(
    private readonly client: ServiceClient,
    private readonly timeoutMs = 20000
  ) {}

  get cacheSize(): number {
    return this.cache.size;
  }

  async sweep(
    base: { family: Family; param: number; n: number; trials: number; seed: number; wheel?: WheelName },
    axis: SweepAxis,
    values: number[]
  ): Promise<SweepResult> {
    const points: ChartPoint[] = [];
    for (const value of values) {
      const params: SimulationParams = { ...base, [axis]: value };
      const key = manifestKey(params);
      let result = this.cache.get(key);
      if (!result) {
        try {
          result = await this.client.simulate(
            params,
            AbortSignal.timeout(this.timeoutMs)
          );
        } catch (err) {
          if (isTimeout(err)) return { points, partial: true };
          throw err;
        }
        this.cache.set(key, result);
      }
      points.push({ x: value, omega: result.omega, stdError: result.std_error });
    }
    return { points, partial: false };
  }
}
