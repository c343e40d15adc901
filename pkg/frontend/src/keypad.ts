/**
 * Keypad layouts. Default is the casino betting grid (players find numbers
 * by table layout); a wheel-order strip is available as a toggle. Outcomes
 * can only enter through these keys, so invalid pockets cannot occur.
 */

import { WheelName } from './api.js';

/** Pocket 37 is the American double zero. */
export const DOUBLE_ZERO = 37;

export const EUROPEAN_WHEEL_ORDER = [
  0, 32, 15, 19, 4, 21, 2, 25, 17, 34, 6, 27, 13, 36, 11, 30, 8, 23, 10, 5,
  24, 16, 33, 1, 20, 14, 31, 9, 22, 18, 29, 7, 28, 12, 35, 3, 26,
];

export const AMERICAN_WHEEL_ORDER = [
  0, 28, 9, 26, 30, 11, 7, 20, 32, 17, 5, 22, 34, 15, 3, 24, 36, 13, 1,
  DOUBLE_ZERO, 27, 10, 25, 29, 12, 8, 19, 31, 18, 6, 21, 33, 16, 4, 23, 35,
  14, 2,
];

export type KeypadMode = 'grid' | 'wheel';

export interface KeypadKey {
  pocket: number;
  label: string;
  row: number;
  col: number;
}

export const pocketLabel = (pocket: number): string =>
  pocket === DOUBLE_ZERO ? '00' : String(pocket);

const gridLayout = (wheel: WheelName): KeypadKey[] => {
  const keys: KeypadKey[] = [{ pocket: 0, label: '0', row: 0, col: 0 }];
  if (wheel === 'american') {
    keys.push({ pocket: DOUBLE_ZERO, label: '00', row: 2, col: 0 });
  }
  // betting-table columns: 3,6,..36 on top, 1,4,..34 at the bottom
  for (let col = 1; col <= 12; col += 1) {
    for (let row = 0; row < 3; row += 1) {
      const pocket = 3 * col - row;
      keys.push({ pocket, label: String(pocket), row, col });
    }
  }
  return keys;
};

const wheelLayout = (wheel: WheelName): KeypadKey[] => {
  const order = wheel === 'american' ? AMERICAN_WHEEL_ORDER : EUROPEAN_WHEEL_ORDER;
  return order.map((pocket, index) => ({
    pocket,
    label: pocketLabel(pocket),
    row: 0,
    col: index,
  }));
};

export const keypadLayout = (mode: KeypadMode, wheel: WheelName): KeypadKey[] =>
  mode === 'wheel' ? wheelLayout(wheel) : gridLayout(wheel);
