import { writeFileSync } from 'fs';
import { basename } from 'path';

import { Series, Unit, traceSeries, wsrSeries } from './aggregate.js';
import { readSummary, readTrace } from './csv.js';
import { renderLineChart } from './svg.js';

export interface WsrFigureSpec {
  csvPaths: string[];
  outPath: string;
  unit: Unit;
  title?: string;
  showStd?: boolean;
}

export interface TraceFigureSpec {
  csvPath: string;
  outPath: string;
  seed: number;
  snrDb: number;
  unit: Unit;
  title?: string;
}

function labelFor(path: string, multiple: boolean): string {
  return multiple ? basename(path).replace(/\.csv$/i, '') : '';
}

function dropEmpty(series: Series[]): Series[] {
  const kept: Series[] = [];
  for (const s of series) {
    if (s.points.length === 0) {
      console.warn(`warning: skipping empty group "${s.label}"`);
      continue;
    }
    kept.push(s);
  }
  return kept;
}

export function plotWsrVsSnr(spec: WsrFigureSpec): string {
  const multiple = spec.csvPaths.length > 1;
  const groups = spec.csvPaths.map((path) => ({
    label: labelFor(path, multiple),
    rows: readSummary(path),
  }));
  const series = dropEmpty(wsrSeries(groups, spec.unit));
  const svg = renderLineChart({
    title: spec.title ?? 'Average WSR vs SNR',
    xLabel: 'SNR (dB)',
    yLabel: spec.unit === 'bits' ? 'Average WSR (bits)' : 'Average WSR (nats)',
    series,
    showStd: spec.showStd ?? false,
  });
  writeFileSync(spec.outPath, svg + '\n', 'utf8');
  return svg;
}

export function plotConvergence(spec: TraceFigureSpec): string {
  const rows = readTrace(spec.csvPath);
  const series = dropEmpty(traceSeries(rows, spec.seed, spec.snrDb, spec.unit));
  const svg = renderLineChart({
    title: spec.title ?? `Convergence, seed ${spec.seed}, ${spec.snrDb} dB`,
    xLabel: 'Iteration',
    yLabel: spec.unit === 'bits' ? 'WSR (bits)' : 'WSR (nats)',
    series,
  });
  writeFileSync(spec.outPath, svg + '\n', 'utf8');
  return svg;
}
