/**
 * Single UI state synchronized from the service.
 *
 * Spins flow through an ordered queue with at most one POST in flight;
 * every render comes from the authoritative GET state, never from
 * client-side arithmetic. A lost reply is reconciled on the next attempt:
 * the 409 answer plus a state fetch tells us whether the entry actually
 * landed, so no outcome is ever recorded twice.
 */

import {
  ApiError,
  DecisionReport,
  ServiceClient,
  SessionState,
  WheelName,
} from './api.js';
import { PendingSpin, SpinQueue } from './queue.js';

export const POLL_BASE_MS = 2000;
export const POLL_MAX_MS = 30000;
const CONFLICT_RETRY_CAP = 5;

export interface ControllerView {
  session: SessionState | null;
  decision: DecisionReport | null;
  pending: readonly PendingSpin[];
  online: boolean;
  draining: boolean;
  notice: string | null;
  bankrolls: number[];
}

export type ViewListener = (view: ControllerView) => void;

export const nextPollDelay = (current: number, ok: boolean): number =>
  ok ? POLL_BASE_MS : Math.min(current * 2, POLL_MAX_MS);

export class SessionController {
  private session: SessionState | null = null;
  private decision: DecisionReport | null = null;
  private inFlight = false;
  private online = true;
  private notice: string | null = null;
  private bankrolls: number[] = [];
  private listeners: ViewListener[] = [];
  private pollDelay = POLL_BASE_MS;
  private pollTimer: ReturnType<typeof setTimeout> | null = null;
  private drainRun: Promise<void> = Promise.resolve();

  constructor(
    private readonly client: ServiceClient,
    private readonly queue: SpinQueue = new SpinQueue()
  ) {}

  async create(body: {
    n: number;
    bet_unit: number;
    bankroll: number;
    wheel: WheelName;
  }): Promise<SessionState> {
    this.session = await this.client.createSession(body);
    this.bankrolls = [this.session.bankroll];
    this.online = true;
    this.emit();
    return this.session;
  }

  async resume(id: string): Promise<SessionState> {
    this.session = await this.client.getState(id);
    this.bankrolls = [this.session.bankroll];
    this.online = true;
    this.emit();
    void this.drain();
    return this.session;
  }

  /** Queue a tapped pocket and start draining; safe to call while offline. */
  enterSpin(outcome: number): void {
    this.queue.push(outcome);
    this.emit();
    void this.drain();
  }

  /** Sequentially post queued spins, one in flight, oldest first. */
  drain(): Promise<void> {
    if (this.inFlight) return this.drainRun;
    this.drainRun = this.drainLoop();
    return this.drainRun;
  }

  private async drainLoop(): Promise<void> {
    if (!this.session || this.inFlight) return;
    this.inFlight = true;
    this.emit();
    let dropped = false;
    try {
      let conflicts = 0;
      while (!this.queue.isEmpty) {
        const entry = this.queue.head()!;
        const sequence = this.session.sequence;
        try {
          await this.client.postSpin(this.session.id, entry.outcome, sequence);
        } catch (err) {
          if (err instanceof ApiError && err.status === 409) {
            const landed = await this.reconcile(entry, sequence);
            if (landed) {
              this.queue.shift();
              conflicts = 0;
              continue;
            }
            conflicts += 1;
            if (conflicts >= CONFLICT_RETRY_CAP) {
              this.queue.shift();
              this.notice = `dropped spin ${entry.outcome}: the session moved on without it`;
              dropped = true;
              conflicts = 0;
            }
            continue;
          }
          if (err instanceof ApiError) {
            // invalid entries cannot come from the keypad; drop, do not wedge
            this.queue.shift();
            this.notice = `spin ${entry.outcome} rejected: ${err.message}`;
            dropped = true;
            continue;
          }
          this.online = false;
          this.notice = `${this.queue.size} unsynced spin(s) queued`;
          return;
        }
        this.queue.shift();
        conflicts = 0;
        await this.refresh();
      }
      // a drop warning stays visible; a clean drain clears the sync notice
      if (!dropped) this.notice = null;
    } finally {
      this.inFlight = false;
      this.emit();
    }
  }

  /** After a 409: did our entry land before the reply was lost? */
  private async reconcile(entry: PendingSpin, sequence: number): Promise<boolean> {
    const fresh = await this.client.getState(this.session!.id);
    const previous = this.session!;
    this.session = fresh;
    this.bankrolls.push(fresh.bankroll);
    this.emit();
    return (
      fresh.sequence === sequence + 1 &&
      previous.sequence === sequence &&
      fresh.window[fresh.window.length - 1] === entry.outcome
    );
  }

  /** Re-render from the authoritative state after an acknowledged spin. */
  private async refresh(): Promise<void> {
    const fresh = await this.client.getState(this.session!.id);
    this.session = fresh;
    this.online = true;
    this.bankrolls.push(fresh.bankroll);
    this.decision = await this.client.getDecision(fresh.id);
    this.emit();
  }

  /** One poll tick; returns the delay until the next one (backoff on failure). */
  async pollOnce(): Promise<number> {
    if (!this.session) return this.pollDelay;
    try {
      const fresh = await this.client.getState(this.session.id);
      if (fresh.sequence !== this.session.sequence) {
        this.bankrolls.push(fresh.bankroll);
      }
      this.session = fresh;
      this.decision = await this.client.getDecision(fresh.id);
      this.online = true;
      this.pollDelay = nextPollDelay(this.pollDelay, true);
      this.emit();
      if (!this.queue.isEmpty) void this.drain();
    } catch {
      this.online = false;
      this.pollDelay = nextPollDelay(this.pollDelay, false);
      this.emit();
    }
    return this.pollDelay;
  }

  start(): void {
    if (this.pollTimer) return;
    const tick = async () => {
      const delay = await this.pollOnce();
      this.pollTimer = setTimeout(tick, delay);
    };
    this.pollTimer = setTimeout(tick, this.pollDelay);
  }

  stop(): void {
    if (this.pollTimer) clearTimeout(this.pollTimer);
    this.pollTimer = null;
  }

  /**
   * The server log, byte-for-byte as the CLI reads it. Unsynced entries are
   * not on the server yet, so exporting would misrepresent the display.
   */
  async exportLog(): Promise<string> {
    if (!this.session) throw new Error('no active session');
    if (!this.queue.isEmpty) {
      throw new Error('sync the queued spins before exporting the log');
    }
    return this.client.getLog(this.session.id);
  }

  /** Resolves once the queue is drained and nothing is in flight. */
  async whenIdle(timeoutMs = 30000): Promise<void> {
    const deadline = Date.now() + timeoutMs;
    while (this.inFlight || !this.queue.isEmpty) {
      if (!this.online) return;
      if (Date.now() > deadline) throw new Error('drain did not settle in time');
      await this.drainRun;
      await new Promise((resolve) => setTimeout(resolve, 5));
    }
  }

  subscribe(listener: ViewListener): void {
    this.listeners.push(listener);
  }

  getView(): ControllerView {
    return {
      session: this.session,
      decision: this.decision,
      pending: this.queue.entries(),
      online: this.online,
      draining: this.inFlight,
      notice: this.notice,
      bankrolls: [...this.bankrolls],
    };
  }

  private emit(): void {
    const view = this.getView();
    for (const listener of this.listeners) listener(view);
  }
}
