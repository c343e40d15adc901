import { describe, expect, it } from 'vitest';

import {
  linearScale,
  omegaBandChart,
  sparklinePath,
  sparklineSvg,
} from '../src/charts.js';

const numbersIn = (text: string): number[] =>
  (text.match(/-?\d+(?:\.\d+)?/g) ?? []).map(Number);

describe('linearScale', () => {
  it('maps the domain ends onto the range ends', () => {
    const scale = linearScale(0, 10, 100, 200);
    expect(scale(0)).toBe(100);
    expect(scale(10)).toBe(200);
    expect(scale(5)).toBe(150);
  });

  it('supports inverted ranges for screen-space y', () => {
    const scale = linearScale(0, 1, 220, 20);
    expect(scale(0)).toBe(220);
    expect(scale(1)).toBe(20);
  });

  it('centers a zero-span domain instead of dividing by zero', () => {
    const scale = linearScale(5, 5, 0, 100);
    expect(scale(5)).toBe(50);
  });
});

describe('sparkline', () => {
  it('walks left to right through every value', () => {
    const path = sparklinePath([10, 20, 15], 220, 48);
    const segments = path.split(' ');
    expect(segments).toHaveLength(3);
    expect(segments[0].startsWith('M')).toBe(true);
    expect(segments.slice(1).every((s) => s.startsWith('L'))).toBe(true);
    const xs = segments.map((s) => numbersIn(s)[0]);
    expect(xs).toEqual([...xs].sort((a, b) => a - b));
  });

  it('puts the maximum at the top of the box', () => {
    const path = sparklinePath([0, 100], 220, 48, 2);
    const ys = path.split(' ').map((s) => numbersIn(s)[1]);
    expect(ys[0]).toBe(46); // minimum sits at the bottom pad
    expect(ys[1]).toBe(2); // maximum at the top pad
  });

  it('is empty for no values and classed by trend direction', () => {
    expect(sparklinePath([], 220, 48)).toBe('');
    expect(sparklineSvg([100, 150])).toContain('class="spark up"');
    expect(sparklineSvg([150, 100])).toContain('class="spark down"');
  });
});

describe('omegaBandChart', () => {
  const points = [
    { x: 1, omega: -0.1, stdError: 0.02 },
    { x: 5, omega: 0.0, stdError: 0.02 },
    { x: 9, omega: 0.1, stdError: 0.02 },
  ];

  it('renders a band polygon, a zero line and the curve', () => {
    const svg = omegaBandChart(points, { width: 420, height: 220 });
    expect(svg).toContain('<polygon class="band"');
    expect(svg).toContain('<line class="zero"');
    expect(svg).toContain('<path class="curve"');
  });

  it('builds the band from upper edge out and lower edge back', () => {
    const svg = omegaBandChart(points);
    const band = svg.match(/points="([^"]+)"/)![1];
    const pairs = band.split(' ').map(numbersIn);
    expect(pairs).toHaveLength(6); // three up, three back
    const xs = pairs.map((p) => p[0]);
    expect(xs.slice(0, 3)).toEqual([...xs.slice(0, 3)].sort((a, b) => a - b));
    expect(xs.slice(3)).toEqual([...xs.slice(0, 3)].reverse());
    // screen y grows downward: the upper edge sits above the lower edge
    expect(pairs[0][1]).toBeLessThan(pairs[5][1]);
  });

  it('pins the zero line where omega crosses zero', () => {
    const svg = omegaBandChart(points, { width: 420, height: 220 });
    const zeroY = numbersIn(svg.match(/y1="([^"]+)"/)![1])[0];
    const curve = svg.match(/d="([^"]+)"/)![1];
    const midY = numbersIn(curve.split(' ')[1])[1];
    expect(Math.abs(zeroY - midY)).toBeLessThan(0.01); // middle point has omega 0
  });

  it('labels the x axis when asked and survives an empty sweep', () => {
    expect(omegaBandChart(points, { xLabel: 'window size' })).toContain('window size');
    expect(omegaBandChart(points)).not.toContain('<text');
    expect(omegaBandChart([])).toContain('<svg');
  });
});
