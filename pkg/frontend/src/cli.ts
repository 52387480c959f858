#!/usr/bin/env node
import { writeFileSync } from 'node:fs';
import { pathToFileURL } from 'node:url';

import { renderFig1 } from './fig1.js';
import { renderFig4 } from './fig4.js';
import { loadRun, ManifestError, RunData } from './manifest.js';

const RENDERERS: Record<string, (run: RunData) => string> = {
  fig1: renderFig1,
  fig4: renderFig4,
};

export interface Args {
  manifest: string;
  figure: string;
  out: string;
}

export function parseArgs(argv: string[]): Args {
  const values: Partial<Args> = {};
  for (let i = 0; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (value === undefined) {
      throw new Error(`missing value for ${flag}`);
    }
    if (flag === '--manifest') values.manifest = value;
    else if (flag === '--figure') values.figure = value;
    else if (flag === '--out') values.out = value;
    else throw new Error(`unknown flag ${flag}`);
  }
  for (const key of ['manifest', 'figure', 'out'] as const) {
    if (values[key] === undefined) {
      throw new Error(`--${key} is required`);
    }
  }
  return values as Args;
}

/** Renders one figure from a verified manifest; returns the process exit
 * code instead of exiting so tests can drive it directly. */
export function run(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(`usage error: ${(err as Error).message}`);
    console.error('usage: eqlab-plot --manifest <path> --figure <id> --out <file>');
    return 2;
  }
  const renderer = RENDERERS[args.figure];
  if (renderer === undefined) {
    console.error(
      `unknown figure ${args.figure}; available: ${Object.keys(RENDERERS).sort().join(', ')}`,
    );
    return 2;
  }
  try {
    const runData = loadRun(args.manifest);
    writeFileSync(args.out, renderer(runData));
  } catch (err) {
    const kind = err instanceof ManifestError ? 'manifest error' : 'render error';
    console.error(`${kind}: ${(err as Error).message}`);
    return 1;
  }
  return 0;
}

if (process.argv[1] !== undefined
    && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(run(process.argv.slice(2)));
}
