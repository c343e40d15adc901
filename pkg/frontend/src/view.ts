/**
 * DOM rendering for the advisor page. Everything shown here is a direct
 * echo of service state: the bet set, phase and verdict are rendered
 * verbatim, never recomputed or softened client-side.
 */

import { DecisionReport, SessionState } from './api.js';
import { sparklineSvg } from './charts.js';
import { ControllerView } from './controller.js';
import { pocketLabel } from './keypad.js';

const el = <T extends HTMLElement>(id: string): T => {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
};

const chip = (text: string, cls: string): string =>
  `<span class="chip ${cls}">${text}</span>`;

const renderStrip = (session: SessionState): string => {
  if (session.window.length === 0) return '<span class="muted">no spins yet</span>';
  return session.window.map((p) => chip(pocketLabel(p), 'strip-chip')).join('');
};

const renderBets = (session: SessionState): string => {
  const rec = session.recommendation;
  if (rec.bets.length === 0) {
    return `<span class="muted">${rec.rationale}</span>`;
  }
  const chips = rec.bets.map((p) => chip(pocketLabel(p), 'bet-chip')).join('');
  const total = rec.bets.length * rec.stake_per_bet;
  return `${chips}<span class="stake">${rec.stake_per_bet} per number, ${total} total</span>`;
};

const renderOmega = (decision: DecisionReport | null): string => {
  if (!decision || decision.settled_spins === 0) {
    return '<span class="muted">no settled spins yet</span>';
  }
  const omega = decision.omega.toFixed(4);
  const band = (2 * decision.std_error).toFixed(4);
  return `&Omega; = ${omega} &plusmn; ${band} over ${decision.settled_spins} settled spins`;
};

export const render = (view: ControllerView): void => {
  const session = view.session;
  const banner = el('verdict');
  const phase = el('phase');
  const sync = el('sync');

  if (!session) {
    banner.textContent = 'no session';
    banner.className = 'verdict';
    phase.textContent = '';
    return;
  }

  el('strip').innerHTML = renderStrip(session);
  el('bets').innerHTML = renderBets(session);
  el('bankroll').textContent = String(session.bankroll);
  el('spark').innerHTML = sparklineSvg(view.bankrolls);
  el('omega').innerHTML = renderOmega(view.decision);

  phase.textContent = session.phase;
  phase.className = `badge phase-${session.phase}`;

  const verdict = view.decision?.verdict ?? 'undecided';
  banner.textContent = verdict;
  banner.className = `verdict verdict-${verdict}`;

  if (!view.online) {
    sync.textContent = view.notice ?? 'offline';
    sync.className = 'sync offline';
  } else if (view.pending.length > 0 || view.draining) {
    sync.textContent = `syncing (${view.pending.length} queued)`;
    sync.className = 'sync pending';
  } else {
    sync.textContent = view.notice ?? 'synced';
    sync.className = 'sync ok';
  }

  el('session-id').textContent = session.id;
};
