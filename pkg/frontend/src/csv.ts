import Papa from 'papaparse';

export interface Table {
  header: string[];
  rows: number[][];
}

/** Parses a numeric CSV with a header row; every cell must be finite. */
export function parseTable(text: string, name: string): Table {
  const parsed = Papa.parse<string[]>(text.trim(), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    throw new Error(`CSV parse error in ${name}: ${parsed.errors[0].message}`);
  }
  const [header, ...raw] = parsed.data;
  if (header === undefined || raw.length === 0) {
    throw new Error(`CSV has no data rows: ${name}`);
  }
  const rows = raw.map((cells, i) => {
    if (cells.length !== header.length) {
      throw new Error(`row ${i + 2} of ${name} has ${cells.length} cells`);
    }
    return cells.map((cell) => {
      const value = Number(cell);
      if (!Number.isFinite(value)) {
        throw new Error(`non-numeric cell ${JSON.stringify(cell)} in ${name}`);
      }
      return value;
    });
  });
  return { header, rows };
}

/** Index of a named column, or an error naming the file. */
export function column(table: Table, name: string, file: string): number {
  const i = table.header.indexOf(name);
  if (i < 0) {
    throw new Error(`column ${name} missing from ${file}`);
  }
  return i;
}
