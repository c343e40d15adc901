import { describe, expect, it } from 'vitest';

import { memoryStorage, SpinQueue } from '../src/queue.js';

describe('SpinQueue', () => {
  it('keeps entry order and acknowledges from the head', () => {
    const queue = new SpinQueue(memoryStorage());
    for (const outcome of [7, 0, 7, 21]) queue.push(outcome);
    expect(queue.size).toBe(4);
    expect(queue.head()!.outcome).toBe(7);
    queue.shift();
    expect(queue.entries().map((p) => p.outcome)).toEqual([0, 7, 21]);
    queue.shift();
    queue.shift();
    queue.shift();
    expect(queue.isEmpty).toBe(true);
    expect(queue.head()).toBeNull();
  });

  it('persists every mutation and restores from storage', () => {
    const storage = memoryStorage();
    const first = new SpinQueue(storage);
    first.push(13);
    first.push(36);
    first.push(2);
    first.shift();

    const second = new SpinQueue(storage);
    expect(second.entries().map((p) => p.outcome)).toEqual([36, 2]);
    expect(second.entries().every((p) => Number.isFinite(p.enteredAt))).toBe(true);
  });

  it('drops corrupted persistence instead of trusting it', () => {
    const storage = memoryStorage();
    storage.save('{not json');
    expect(new SpinQueue(storage).isEmpty).toBe(true);

    storage.save(JSON.stringify([{ outcome: 4, enteredAt: 1 }, { outcome: 'x' }, 7]));
    const queue = new SpinQueue(storage);
    expect(queue.entries().map((p) => p.outcome)).toEqual([4]);
  });

  it('starts empty when storage has nothing', () => {
    expect(new SpinQueue(memoryStorage()).isEmpty).toBe(true);
    expect(new SpinQueue().isEmpty).toBe(true);
  });
});
