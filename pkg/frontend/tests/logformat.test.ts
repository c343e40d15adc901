import { describe, expect, it } from 'vitest';

import { DOUBLE_ZERO } from '../src/keypad.js';
import { downloadName, LOG_HEADER, logOutcomes, parseLog } from '../src/logtext.js';

const sample = [
  LOG_HEADER,
  '0,2026-08-15T10:00:00+00:00,17',
  '1,2026-08-15T10:01:00+00:00,0',
  '2,2026-08-15T10:02:00+00:00,00',
  '',
].join('\n');

describe('parseLog', () => {
  it('reads indexed rows and maps the double zero to its pocket', () => {
    const rows = parseLog(sample);
    expect(rows).toHaveLength(3);
    expect(rows.map((r) => r.outcome)).toEqual([17, 0, DOUBLE_ZERO]);
    expect(rows[0].timestamp).toBe('2026-08-15T10:00:00+00:00');
    expect(logOutcomes(sample)).toEqual([17, 0, 37]);
  });

  it('accepts a header-only log as an empty session', () => {
    expect(parseLog(`${LOG_HEADER}\n`)).toEqual([]);
  });

  it('rejects a foreign or missing header', () => {
    expect(() => parseLog('# other-format v9\n0,t,1\n')).toThrow(/unrecognized log header/);
    expect(() => parseLog('')).toThrow(/unrecognized log header/);
  });

  it('rejects malformed rows with the offending line number', () => {
    expect(() => parseLog(`${LOG_HEADER}\n0,t\n`)).toThrow(/line 2/);
    expect(() => parseLog(`${LOG_HEADER}\n1,t,5\n`)).toThrow(/out of order/);
    expect(() => parseLog(`${LOG_HEADER}\n0,t,5\n0,t,6\n`)).toThrow(/line 3/);
    expect(() => parseLog(`${LOG_HEADER}\n0,t,zero\n`)).toThrow(/bad outcome/);
  });
});

describe('downloadName', () => {
  it('names the exported file after the session', () => {
    expect(downloadName('ab12')).toBe('session-ab12.log');
  });
});
