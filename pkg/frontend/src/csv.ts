import { readFileSync } from 'fs';

export interface SummaryRow {
  seed: number;
  snrDb: number;
  scheme: string;
  status: string;
  finalWsrNats: number;
}

export interface TraceRow {
  seed: number;
  snrDb: number;
  scheme: string;
  iter: number;
  wsrNats: number;
}

export class SchemaError extends Error {}

function parseTable(text: string): { header: string[]; rows: string[][] } {
  const lines = text.split('\n').filter((line) => line.trim().length > 0);
  if (lines.length === 0) {
    throw new SchemaError('empty CSV file');
  }
  const header = lines[0].split(',');
  const rows = lines.slice(1).map((line) => line.split(','));
  return { header, rows };
}

function requireColumns(header: string[], wanted: string[], path: string): Map<string, number> {
  const index = new Map<string, number>();
  header.forEach((name, i) => index.set(name, i));
  for (const name of wanted) {
    if (!index.has(name)) {
      throw new SchemaError(`${path}: missing column "${name}" (found: ${header.join(', ')})`);
    }
  }
  return index;
}

export function readSummary(path: string): SummaryRow[] {
  const { header, rows } = parseTable(readFileSync(path, 'utf8'));
  const idx = requireColumns(
    header,
    ['seed', 'snr_db', 'scheme', 'status', 'final_wsr_nats'],
    path,
  );
  const out: SummaryRow[] = [];
  for (const row of rows) {
    const status = row[idx.get('status')!];
    if (status !== 'ok') continue; // error rows carry no usable rate
    out.push({
      seed: Number(row[idx.get('seed')!]),
      snrDb: Number(row[idx.get('snr_db')!]),
      scheme: row[idx.get('scheme')!],
      status,
      finalWsrNats: Number(row[idx.get('final_wsr_nats')!]),
    });
  }
  return out;
}

export function readTrace(path: string): TraceRow[] {
  const { header, rows } = parseTable(readFileSync(path, 'utf8'));
  const idx = requireColumns(header, ['seed', 'snr_db', 'scheme', 'iter', 'wsr_nats'], path);
  return rows.map((row) => ({
    seed: Number(row[idx.get('seed')!]),
    snrDb: Number(row[idx.get('snr_db')!]),
    scheme: row[idx.get('scheme')!],
    iter: Number(row[idx.get('iter')!]),
    wsrNats: Number(row[idx.get('wsr_nats')!]),
  }));
}
