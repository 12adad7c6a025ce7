import { Series } from './aggregate.js';

export interface ChartSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  showStd?: boolean;
}

const WIDTH = 760;
const HEIGHT = 480;
const MARGIN = { top: 48, right: 180, bottom: 56, left: 72 };

const PALETTE = ['#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e', '#8c564b'];

function niceTicks(lo: number, hi: number, count = 6): number[] {
  if (!(hi > lo)) {
    const pad = Math.abs(lo) > 0 ? Math.abs(lo) * 0.5 : 1;
    lo -= pad;
    hi += pad;
  }
  const rawStep = (hi - lo) / (count - 1);
  const power = Math.floor(Math.log10(rawStep));
  const base = rawStep / 10 ** power;
  const niceBase = base >= 5 ? 5 : base >= 2 ? 2 : 1;
  const step = niceBase * 10 ** power;
  const start = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= hi + 1e-9 * step; v += step) {
    ticks.push(Number(v.toPrecision(12)));
  }
  return ticks;
}

function fmt(value: number): string {
  return Number(value.toPrecision(6)).toString();
}

/** Deterministic standalone SVG line chart. */
export function renderLineChart(spec: ChartSpec): string {
  const points = spec.series.flatMap((s) => s.points);
  if (points.length === 0) {
    throw new Error('no data points to plot');
  }
  const xs = points.map((p) => p.x);
  const ys = spec.showStd
    ? points.flatMap((p) => [p.y - p.std, p.y + p.std])
    : points.map((p) => p.y);
  let xLo = Math.min(...xs);
  let xHi = Math.max(...xs);
  let yLo = Math.min(...ys, 0);
  let yHi = Math.max(...ys);
  if (xHi === xLo) {
    xLo -= 1;
    xHi += 1;
  }
  if (yHi === yLo) {
    yHi += 1;
  }
  const innerW = WIDTH - MARGIN.left - MARGIN.right;
  const innerH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const sx = (x: number) => MARGIN.left + ((x - xLo) / (xHi - xLo)) * innerW;
  const sy = (y: number) => MARGIN.top + innerH - ((y - yLo) / (yHi - yLo)) * innerH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="16">${spec.title}</text>`,
  );

  for (const t of niceTicks(xLo, xHi)) {
    const x = sx(t);
    parts.push(
      `<line x1="${fmt(x)}" y1="${MARGIN.top}" x2="${fmt(x)}" ` +
        `y2="${MARGIN.top + innerH}" stroke="#dddddd" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${fmt(x)}" y="${MARGIN.top + innerH + 20}" text-anchor="middle" ` +
        `font-size="12">${fmt(t)}</text>`,
    );
  }
  for (const t of niceTicks(yLo, yHi)) {
    const y = sy(t);
    parts.push(
      `<line x1="${MARGIN.left}" y1="${fmt(y)}" x2="${MARGIN.left + innerW}" ` +
        `y2="${fmt(y)}" stroke="#dddddd" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${MARGIN.left - 8}" y="${fmt(y + 4)}" text-anchor="end" ` +
        `font-size="12">${fmt(t)}</text>`,
    );
  }
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${innerW}" height="${innerH}" ` +
      `fill="none" stroke="#333333"/>`,
  );
  parts.push(
    `<text x="${MARGIN.left + innerW / 2}" y="${HEIGHT - 12}" text-anchor="middle" ` +
      `font-size="14">${spec.xLabel}</text>`,
  );
  parts.push(
    `<text x="20" y="${MARGIN.top + innerH / 2}" text-anchor="middle" font-size="14" ` +
      `transform="rotate(-90 20 ${MARGIN.top + innerH / 2})">${spec.yLabel}</text>`,
  );

  spec.series.forEach((series, i) => {
    const color = PALETTE[i % PALETTE.length];
    const coords = series.points.map((p) => `${fmt(sx(p.x))},${fmt(sy(p.y))}`).join(' ');
    if (spec.showStd) {
      for (const p of series.points) {
        parts.push(
          `<line x1="${fmt(sx(p.x))}" y1="${fmt(sy(p.y - p.std))}" x2="${fmt(sx(p.x))}" ` +
            `y2="${fmt(sy(p.y + p.std))}" stroke="${color}" stroke-width="1"/>`,
        );
      }
    }
    parts.push(
      `<polyline points="${coords}" fill="none" stroke="${color}" stroke-width="2" ` +
        `data-series="${series.label}" data-values="${series.points
          .map((p) => `${p.x}:${p.y}`)
          .join(';')}"/>`,
    );
    for (const p of series.points) {
      parts.push(
        `<circle cx="${fmt(sx(p.x))}" cy="${fmt(sy(p.y))}" r="3" fill="${color}"/>`,
      );
    }
    const ly = MARGIN.top + 16 + i * 20;
    const lx = MARGIN.left + innerW + 12;
    parts.push(
      `<line x1="${lx}" y1="${ly - 4}" x2="${lx + 24}" y2="${ly - 4}" ` +
        `stroke="${color}" stroke-width="2"/>`,
    );
    parts.push(`<text x="${lx + 30}" y="${ly}" font-size="12">${series.label}</text>`);
  });

  parts.push('</svg>');
  return parts.join('\n');
}
