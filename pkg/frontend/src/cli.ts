#!/usr/bin/env node
import { plotConvergence, plotWsrVsSnr } from './figures.js';

const USAGE = `usage:
  figures wsr --csv PATH [--csv PATH ...] --out PATH [--bits] [--std] [--title T]
  figures trace --csv PATH --seed S --snr X --out PATH [--bits] [--title T]`;

interface Flags {
  csv: string[];
  out?: string;
  seed?: number;
  snr?: number;
  bits: boolean;
  std: boolean;
  title?: string;
}

function parseFlags(argv: string[]): Flags {
  const flags: Flags = { csv: [], bits: false, std: false };
  for (let i = 0; i < argv.length; i += 1) {
    const arg = argv[i];
    const next = () => {
      i += 1;
      if (i >= argv.length) throw new Error(`missing value for ${arg}`);
      return argv[i];
    };
    switch (arg) {
      case '--csv':
        flags.csv.push(next());
        break;
      case '--out':
        flags.out = next();
        break;
      case '--seed':
        flags.seed = Number(next());
        break;
      case '--snr':
        flags.snr = Number(next());
        break;
      case '--bits':
        flags.bits = true;
        break;
      case '--std':
        flags.std = true;
        break;
      case '--title':
        flags.title = next();
        break;
      default:
        throw new Error(`unknown flag ${arg}`);
    }
  }
  return flags;
}

export function main(argv: string[]): number {
  const [command, ...rest] = argv;
  try {
    const flags = parseFlags(rest);
    const unit = flags.bits ? 'bits' : 'nats';
    if (command === 'wsr') {
      if (flags.csv.length === 0 || !flags.out) throw new Error('wsr needs --csv and --out');
      plotWsrVsSnr({
        csvPaths: flags.csv,
        outPath: flags.out,
        unit,
        title: flags.title,
        showStd: flags.std,
      });
      console.log(`wrote ${flags.out}`);
      return 0;
    }
    if (command === 'trace') {
      if (flags.csv.length !== 1 || !flags.out || flags.seed === undefined || flags.snr === undefined) {
        throw new Error('trace needs --csv, --seed, --snr and --out');
      }
      plotConvergence({
        csvPath: flags.csv[0],
        outPath: flags.out,
        seed: flags.seed,
        snrDb: flags.snr,
        unit,
        title: flags.title,
      });
      console.log(`wrote ${flags.out}`);
      return 0;
    }
    console.error(USAGE);
    return 1;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
}

if (process.argv[1] && process.argv[1].endsWith('cli.js')) {
  process.exit(main(process.argv.slice(2)));
}
