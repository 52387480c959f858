import { createHash } from 'node:crypto';
import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';

export interface ManifestEntry {
  path: string;
  sha256: string;
}

export interface Manifest {
  experiment: string;
  seed: number;
  params: Record<string, unknown>;
  outputs: ManifestEntry[];
}

/** Raised for any integrity problem with a run directory. */
export class ManifestError extends Error {}

/** A verified run directory: manifest plus hash-checked file contents. */
export class RunData {
  constructor(
    readonly manifest: Manifest,
    private readonly files: Map<string, Buffer>,
  ) {}

  read(name: string): Buffer {
    const data = this.files.get(name);
    if (data === undefined) {
      throw new ManifestError(`file not listed in manifest: ${name}`);
    }
    return data;
  }

  readText(name: string): string {
    return this.read(name).toString('utf8');
  }

  has(name: string): boolean {
    return this.files.has(name);
  }
}

function parseManifest(raw: unknown, path: string): Manifest {
  if (typeof raw !== 'object' || raw === null) {
    throw new ManifestError(`manifest is not a JSON object: ${path}`);
  }
  const m = raw as Partial<Manifest>;
  if (typeof m.experiment !== 'string' || !Array.isArray(m.outputs)) {
    throw new ManifestError(`manifest missing experiment/outputs: ${path}`);
  }
  for (const entry of m.outputs) {
    if (typeof entry?.path !== 'string' || typeof entry?.sha256 !== 'string') {
      throw new ManifestError(`malformed output entry in ${path}`);
    }
  }
  return m as Manifest;
}

/**
 * Loads a manifest and every file it lists, verifying each sha256.
 * Any missing or modified file aborts with the offending name.
 */
export function loadRun(manifestPath: string): RunData {
  let text: string;
  try {
    text = readFileSync(manifestPath, 'utf8');
  } catch {
    throw new ManifestError(`cannot read manifest: ${manifestPath}`);
  }
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch {
    throw new ManifestError(`manifest is not valid JSON: ${manifestPath}`);
  }
  const manifest = parseManifest(raw, manifestPath);
  if (manifest.outputs.length === 0) {
    throw new ManifestError(`manifest lists no outputs: ${manifestPath}`);
  }
  const root = dirname(manifestPath);
  const files = new Map<string, Buffer>();
  for (const entry of manifest.outputs) {
    let data: Buffer;
    try {
      data = readFileSync(join(root, entry.path));
    } catch {
      throw new ManifestError(`missing output file: ${entry.path}`);
    }
    const digest = createHash('sha256').update(data).digest('hex');
    if (digest !== entry.sha256) {
      throw new ManifestError(
        `hash mismatch for ${entry.path}: manifest ${entry.sha256}, file ${digest}`,
      );
    }
    files.set(entry.path, data);
  }
  return new RunData(manifest, files);
}
