/**
 * Ordered store for spins entered while the service is unreachable.
 * Entries keep their entry order and are acknowledged strictly from the
 * head, so sequence numbers are always assigned against fresh server state
 * at send time and can never duplicate.
 */

export interface PendingSpin {
  outcome: number;
  enteredAt: number;
}

export interface QueueStorage {
  load(): string | null;
  save(text: string): void;
}

export const memoryStorage = (): QueueStorage => {
  let text: string | null = null;
  return {
    load: () => text,
    save: (t) => {
      text = t;
    },
  };
};

export const browserStorage = (key: string): QueueStorage => ({
  load: () => window.localStorage.getItem(key),
  save: (t) => window.localStorage.setItem(key, t),
});

export class SpinQueue {
  private items: PendingSpin[] = [];

  constructor(private readonly storage: QueueStorage = memoryStorage()) {
    const saved = this.storage.load();
    if (saved) {
      try {
        const parsed = JSON.parse(saved) as PendingSpin[];
        if (Array.isArray(parsed)) {
          this.items = parsed.filter(
            (p) => Number.isInteger(p.outcome) && Number.isFinite(p.enteredAt)
          );
        }
      } catch {
        // corrupted persistence is dropped, never trusted
      }
    }
  }

  get size(): number {
    return this.items.length;
  }

  get isEmpty(): boolean {
    return this.items.length === 0;
  }

  entries(): readonly PendingSpin[] {
    return this.items;
  }

  push(outcome: number): void {
    this.items.push({ outcome, enteredAt: Date.now() });
    this.persist();
  }

  head(): PendingSpin | null {
    return this.items[0] ?? null;
  }

  /** Acknowledge the head entry after the server accepted it. */
  shift(): void {
    this.items.shift();
    this.persist();
  }

  private persist(): void {
    this.storage.save(JSON.stringify(this.items));
  }
}
