/**
 * Page wiring: forms, keypad, export and what-if panel. All strategy
 * decisions come from the service; this file only moves DOM events into
 * controller calls and controller state back into the DOM.
 */

import { ServiceClient, WheelName } from './api.js';
import { omegaBandChart } from './charts.js';
import { SessionController } from './controller.js';
import { keypadLayout, KeypadMode } from './keypad.js';
import { downloadName } from './logtext.js';
import { browserStorage, SpinQueue } from './queue.js';
import { render } from './view.js';
import { canSubmit, WhatIfForm, WhatIfPanel } from './whatif.js';

const input = (id: string): HTMLInputElement =>
  document.getElementById(id) as HTMLInputElement;
const select = (id: string): HTMLSelectElement =>
  document.getElementById(id) as HTMLSelectElement;
const button = (id: string): HTMLButtonElement =>
  document.getElementById(id) as HTMLButtonElement;

const baseUrl = (): string =>
  input('base-url').value.trim() || 'http://127.0.0.1:8787';

let controller: SessionController | null = null;
let keypadMode: KeypadMode = 'grid';

const renderKeypad = (wheel: WheelName): void => {
  const pad = document.getElementById('keypad')!;
  pad.innerHTML = '';
  pad.className = `keypad keypad-${keypadMode}`;
  for (const key of keypadLayout(keypadMode, wheel)) {
    const b = document.createElement('button');
    b.textContent = key.label;
    b.className = 'key';
    b.style.gridRow = String(key.row + 1);
    b.style.gridColumn = String(key.col + 1);
    b.addEventListener('click', () => controller?.enterSpin(key.pocket));
    pad.appendChild(b);
  }
};

const attach = (ctl: SessionController): void => {
  controller?.stop();
  controller = ctl;
  ctl.subscribe(render);
  ctl.start();
  const wheel = ctl.getView().session?.config.wheel ?? 'european';
  renderKeypad(wheel);
};

const startSession = async (): Promise<void> => {
  const client = new ServiceClient(baseUrl());
  const queue = new SpinQueue(browserStorage('lastn-pending'));
  const ctl = new SessionController(client, queue);
  const resume = input('resume-id').value.trim();
  try {
    if (resume) {
      await ctl.resume(resume);
    } else {
      await ctl.create({
        n: Number(input('cfg-n').value),
        bet_unit: Number(input('cfg-unit').value),
        bankroll: Number(input('cfg-bankroll').value),
        wheel: select('cfg-wheel').value as WheelName,
      });
    }
    attach(ctl);
  } catch (err) {
    document.getElementById('sync')!.textContent = String(err);
  }
};

const exportLog = async (): Promise<void> => {
  if (!controller) return;
  try {
    const text = await controller.exportLog();
    const id = controller.getView().session?.id ?? 'session';
    const blob = new Blob([text], { type: 'text/plain' });
    const a = document.createElement('a');
    a.href = URL.createObjectURL(blob);
    a.download = downloadName(id);
    a.click();
    URL.revokeObjectURL(a.href);
  } catch (err) {
    document.getElementById('sync')!.textContent = String(err);
  }
};

const readWhatIf = (): WhatIfForm => ({
  family: select('wi-family').value as WhatIfForm['family'],
  param: input('wi-param').value,
  n: input('wi-n').value,
  trials: input('wi-trials').value,
  seed: input('wi-seed').value,
});

const runWhatIf = async (panel: WhatIfPanel): Promise<void> => {
  const form = readWhatIf();
  if (!canSubmit(form)) return;
  const status = document.getElementById('wi-status')!;
  status.textContent = 'running';
  const base = {
    family: form.family as 'gaussian' | 'linear',
    param: Number(form.param),
    n: Number(form.n),
    trials: Number(form.trials),
    seed: Number(form.seed),
  };
  const ns = [1, 2, 3, 5, 8, 12, 17, 23].filter((n) => n <= base.n * 4 || n <= 8);
  try {
    const sweep = await panel.sweep(base, 'n', ns);
    document.getElementById('wi-chart')!.innerHTML =
      omegaBandChart(sweep.points, { xLabel: 'window size' });
    status.textContent = sweep.partial ? 'partial (timed out)' : 'done';
  } catch (err) {
    status.textContent = String(err);
  }
};

const main = (): void => {
  const panel = new WhatIfPanel(new ServiceClient(baseUrl()));
  button('start').addEventListener('click', () => void startSession());
  button('export').addEventListener('click', () => void exportLog());
  button('wi-run').addEventListener('click', () => void runWhatIf(panel));
  button('pad-mode').addEventListener('click', () => {
    keypadMode = keypadMode === 'grid' ? 'wheel' : 'grid';
    const wheel = controller?.getView().session?.config.wheel ?? 'european';
    renderKeypad(wheel);
  });
  const gate = (): void => {
    button('wi-run').disabled = !canSubmit(readWhatIf());
  };
  for (const id of ['wi-param', 'wi-n', 'wi-trials', 'wi-seed']) {
    input(id).addEventListener('input', gate);
  }
  select('wi-family').addEventListener('change', gate);
  gate();
  renderKeypad('european');
};

document.addEventListener('DOMContentLoaded', main);
