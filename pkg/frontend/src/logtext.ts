/**
 * The versioned spin-log text format shared with the CLI. The service is
 * the source of truth; this parser only validates and displays.
 */

import { DOUBLE_ZERO } from './keypad.js';

export const LOG_HEADER = '# lastn-spin-log v1';

export interface LogLine {
  index: number;
  timestamp: string;
  outcome: number;
}

export const parseLog = (text: string): LogLine[] => {
  const lines = text.split('\n').filter((line) => line.length > 0);
  if (lines[0] !== LOG_HEADER) {
    throw new Error(`unrecognized log header: ${lines[0] ?? '(empty)'}`);
  }
  const rows: LogLine[] = [];
  for (const [at, line] of lines.slice(1).entries()) {
    const parts = line.split(',');
    if (parts.length !== 3) {
      throw new Error(`line ${at + 2}: expected index,timestamp,outcome`);
    }
    const index = Number(parts[0]);
    const outcome = parts[2] === '00' ? DOUBLE_ZERO : Number(parts[2]);
    if (!Number.isInteger(index) || index !== at) {
      throw new Error(`line ${at + 2}: index ${parts[0]} out of order`);
    }
    if (!Number.isInteger(outcome)) {
      throw new Error(`line ${at + 2}: bad outcome ${parts[2]}`);
    }
    rows.push({ index, timestamp: parts[1], outcome });
  }
  return rows;
};

export const logOutcomes = (text: string): number[] =>
  parseLog(text).map((row) => row.outcome);

export const downloadName = (sessionId: string): string =>
  `session-${sessionId}.log`;
