import { describe, expect, it } from 'vitest';

import { FetchLike, ServiceClient } from '../src/api.js';
import { canSubmit, manifestKey, WhatIfPanel } from '../src/whatif.js';
import { FakeService } from './fakeservice.js';

describe('canSubmit', () => {
  const valid = { family: 'gaussian' as const, param: '0.05', n: '7', trials: '1000', seed: '1' };

  it('accepts a fully parsed form', () => {
    expect(canSubmit(valid)).toBe(true);
    expect(canSubmit({ ...valid, param: '0' })).toBe(true);
  });

  it('stays disabled until every field parses', () => {
    expect(canSubmit({ ...valid, family: '' })).toBe(false);
    expect(canSubmit({ ...valid, param: '' })).toBe(false);
    expect(canSubmit({ ...valid, param: 'abc' })).toBe(false);
    expect(canSubmit({ ...valid, param: '-0.1' })).toBe(false);
    expect(canSubmit({ ...valid, n: '0' })).toBe(false);
    expect(canSubmit({ ...valid, n: '2.5' })).toBe(false);
    expect(canSubmit({ ...valid, trials: '0' })).toBe(false);
    expect(canSubmit({ ...valid, seed: '1.5' })).toBe(false);
  });
});

describe('manifest cache', () => {
  const base = { family: 'gaussian' as const, param: 0.05, n: 7, trials: 1000, seed: 1 };

  it('keys on the full parameter manifest', () => {
    expect(manifestKey({ ...base })).toBe(manifestKey({ ...base, wheel: 'european' }));
    expect(manifestKey({ ...base })).not.toBe(manifestKey({ ...base, seed: 2 }));
    expect(manifestKey({ ...base })).not.toBe(manifestKey({ ...base, wheel: 'american' }));
  });

  it('fetches each manifest once and serves revisits from cache', async () => {
    const fake = new FakeService();
    const panel = new WhatIfPanel(new ServiceClient('http://fake', fake.fetch()));
    const first = await panel.sweep(base, 'n', [1, 2, 3]);
    expect(first.partial).toBe(false);
    expect(first.points.map((p) => p.x)).toEqual([1, 2, 3]);
    expect(fake.simulateCalls).toBe(3);

    const again = await panel.sweep(base, 'n', [2, 3, 1]);
    expect(fake.simulateCalls).toBe(3); // all hits, no new round trips
    expect(again.points).toHaveLength(3);
    expect(panel.cacheSize).toBe(3);

    await panel.sweep({ ...base, n: 2 }, 'param', [0.05, 0.1]);
    expect(fake.simulateCalls).toBe(4); // param 0.05 at n 2 was already cached
  });

  it('returns the gathered points flagged partial when a request times out', async () => {
    let calls = 0;
    const slowSecond: FetchLike = (input, init) => {
      calls += 1;
      if (calls === 1) {
        return new FakeService().fetch()(input, init);
      }
      return new Promise((_, reject) => {
        init?.signal?.addEventListener('abort', () => reject(init.signal!.reason));
      });
    };
    const panel = new WhatIfPanel(new ServiceClient('http://fake', slowSecond), 20);
    const result = await panel.sweep(base, 'n', [1, 2, 3]);
    expect(result.partial).toBe(true);
    expect(result.points).toHaveLength(1);
    expect(result.points[0].x).toBe(1);
  });
});
