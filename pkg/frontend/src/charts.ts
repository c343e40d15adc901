/**
 * Dependency-free SVG builders: a bankroll sparkline and an omega chart
 * with a one-standard-error band. Pure string output, no DOM required.
 */

export interface ChartPoint {
  x: number;
  omega: number;
  stdError: number;
}

export interface Scale {
  (value: number): number;
}

export const linearScale = (
  domainLo: number,
  domainHi: number,
  rangeLo: number,
  rangeHi: number
): Scale => {
  const span = domainHi - domainLo;
  return (value) =>
    span === 0
      ? (rangeLo + rangeHi) / 2
      : rangeLo + ((value - domainLo) / span) * (rangeHi - rangeLo);
};

const fmt = (value: number): string => value.toFixed(2);

export const sparklinePath = (
  values: number[],
  width: number,
  height: number,
  pad = 2
): string => {
  if (values.length === 0) return '';
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const x = linearScale(0, Math.max(values.length - 1, 1), pad, width - pad);
  const y = linearScale(lo, hi, height - pad, pad);
  return values
    .map((v, i) => `${i === 0 ? 'M' : 'L'}${fmt(x(i))},${fmt(y(v))}`)
    .join(' ');
};

/** Bankroll trajectory as a small inline SVG. */
export const sparklineSvg = (values: number[], width = 220, height = 48): string => {
  const path = sparklinePath(values, width, height);
  const rising = values.length > 1 && values[values.length - 1] >= values[0];
  const cls = rising ? 'spark up' : 'spark down';
  return (
    `<svg class="${cls}" viewBox="0 0 ${width} ${height}" ` +
    `width="${width}" height="${height}" role="img">` +
    `<path class="curve" d="${path}" fill="none" stroke-width="1.5"/></svg>`
  );
};

export interface OmegaChartOptions {
  width?: number;
  height?: number;
  xLabel?: string;
}

/**
 * Omega versus the swept axis with a +-SE band and the zero line the
 * player is trying to cross.
 */
export const omegaBandChart = (
  points: ChartPoint[],
  options: OmegaChartOptions = {}
): string => {
  const width = options.width ?? 420;
  const height = options.height ?? 220;
  const pad = 28;
  if (points.length === 0) {
    return `<svg viewBox="0 0 ${width} ${height}" width="${width}" height="${height}"></svg>`;
  }
  const xs = points.map((p) => p.x);
  const los = points.map((p) => p.omega - p.stdError);
  const his = points.map((p) => p.omega + p.stdError);
  const yLo = Math.min(...los, 0);
  const yHi = Math.max(...his, 0);
  const x = linearScale(Math.min(...xs), Math.max(...xs), pad, width - pad);
  const y = linearScale(yLo, yHi, height - pad, pad);

  const band =
    points.map((p) => `${fmt(x(p.x))},${fmt(y(p.omega + p.stdError))}`).join(' ') +
    ' ' +
    [...points]
      .reverse()
      .map((p) => `${fmt(x(p.x))},${fmt(y(p.omega - p.stdError))}`)
      .join(' ');
  const curve = points
    .map((p, i) => `${i === 0 ? 'M' : 'L'}${fmt(x(p.x))},${fmt(y(p.omega))}`)
    .join(' ');
  const zero = fmt(y(0));
  const label = options.xLabel
    ? `<text x="${width / 2}" y="${height - 6}" text-anchor="middle" class="axis">${options.xLabel}</text>`
    : '';
  return (
    `<svg class="omega-chart" viewBox="0 0 ${width} ${height}" ` +
    `width="${width}" height="${height}" role="img">` +
    `<polygon class="band" points="${band}"/>` +
    `<line class="zero" x1="${pad}" y1="${zero}" x2="${width - pad}" y2="${zero}"/>` +
    `<path class="curve" d="${curve}" fill="none"/>` +
    label +
    '</svg>'
  );
};
