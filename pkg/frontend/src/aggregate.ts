import { SummaryRow, TraceRow } from './csv.js';

export type Unit = 'nats' | 'bits';

export interface SeriesPoint {
  x: number;
  y: number;
  std: number;
}

export interface Series {
  label: string;
  points: SeriesPoint[];
}

export function natsToBits(value: number): number {
  return value / Math.LN2;
}

function mean(values: number[]): number {
  return values.reduce((acc, v) => acc + v, 0) / values.length;
}

function std(values: number[]): number {
  if (values.length < 2) return 0;
  const m = mean(values);
  return Math.sqrt(mean(values.map((v) => (v - m) ** 2)));
}

/** Average the final rates over seeds, one series per (scheme, label). */
export function wsrSeries(
  rowsByLabel: Array<{ label: string; rows: SummaryRow[] }>,
  unit: Unit,
): Series[] {
  const series: Series[] = [];
  for (const { label, rows } of rowsByLabel) {
    const schemes = [...new Set(rows.map((r) => r.scheme))].sort();
    for (const scheme of schemes) {
      const mine = rows.filter((r) => r.scheme === scheme);
      const snrs = [...new Set(mine.map((r) => r.snrDb))].sort((a, b) => a - b);
      const points = snrs.map((snr) => {
        const values = mine
          .filter((r) => r.snrDb === snr)
          .map((r) => (unit === 'bits' ? natsToBits(r.finalWsrNats) : r.finalWsrNats));
        return { x: snr, y: mean(values), std: std(values) };
      });
      series.push({ label: label ? `${scheme} (${label})` : scheme, points });
    }
  }
  return series;
}

/** Per-iteration objective of one (seed, snr) cell, one series per scheme. */
export function traceSeries(rows: TraceRow[], seed: number, snrDb: number, unit: Unit): Series[] {
  const selected = rows.filter((r) => r.seed === seed && r.snrDb === snrDb);
  if (selected.length === 0) {
    const cells = [...new Set(rows.map((r) => `${r.seed}@${r.snrDb}`))].sort();
    throw new Error(
      `no trace rows for seed ${seed} at ${snrDb} dB (available: ${cells.join(', ')})`,
    );
  }
  const schemes = [...new Set(selected.map((r) => r.scheme))].sort();
  return schemes.map((scheme) => ({
    label: scheme,
    points: selected
      .filter((r) => r.scheme === scheme)
      .sort((a, b) => a.iter - b.iter)
      .map((r) => ({
        x: r.iter,
        y: unit === 'bits' ? natsToBits(r.wsrNats) : r.wsrNats,
        std: 0,
      })),
  }));
}
