import { column, parseTable, Table } from './csv.js';
import { RunData } from './manifest.js';
import { heatColor, SvgDoc } from './svg.js';

const CELL = 180;
const PAD = 50;
const GAP = 26;

interface Grid {
  thetas: number[];
  betas: number[];
  values: Map<string, number>;
}

function toGrid(table: Table, col: number, file: string): Grid {
  const it = column(table, 'theta_rad', file);
  const ib = column(table, 'beta_rad', file);
  const thetas = [...new Set(table.rows.map((r) => r[it]))].sort((a, b) => a - b);
  const betas = [...new Set(table.rows.map((r) => r[ib]))].sort((a, b) => a - b);
  const values = new Map<string, number>();
  for (const row of table.rows) {
    values.set(`${row[it]}|${row[ib]}`, row[col]);
  }
  return { thetas, betas, values };
}

function drawHeatmap(
  doc: SvgDoc,
  grid: Grid,
  x0: number,
  y0: number,
  title: string,
): void {
  const dw = CELL / grid.thetas.length;
  const dh = CELL / grid.betas.length;
  grid.thetas.forEach((theta, i) => {
    grid.betas.forEach((beta, j) => {
      const value = grid.values.get(`${theta}|${beta}`) ?? 0;
      // beta increases upward
      doc.rect(
        x0 + i * dw,
        y0 + CELL - (j + 1) * dh,
        dw + 0.5,
        dh + 0.5,
        heatColor(value),
      );
    });
  });
  doc.text(x0, y0 - 8, title, 12);
  doc.text(x0 + CELL / 2, y0 + CELL + 16, 'theta', 10, 'middle');
  doc.text(x0 - 8, y0 + CELL / 2, 'beta', 10, 'end');
}

/** 3x2 panel: one row per comb size, columns ground probability and purity. */
export function renderFig1(run: RunData): string {
  const maps = run.manifest.outputs
    .map((o) => o.path)
    .filter((p) => /^fig1_map_N\d+\.csv$/.test(p))
    .sort((a, b) => Number(a.match(/\d+/)![0]) - Number(b.match(/\d+/)![0]));
  if (maps.length === 0) {
    throw new Error('manifest holds no fig1 map files');
  }
  const width = PAD * 2 + 2 * CELL + GAP;
  const height = PAD + maps.length * (CELL + GAP + 18);
  const doc = new SvgDoc(width, height);
  maps.forEach((file, rowIdx) => {
    const n = file.match(/\d+/)![0];
    const table = parseTable(run.readText(file), file);
    const y0 = PAD + rowIdx * (CELL + GAP + 18);
    drawHeatmap(doc, toGrid(table, column(table, 'ground_prob', file), file),
      PAD, y0, `N=${n} ground probability`);
    drawHeatmap(doc, toGrid(table, column(table, 'purity', file), file),
      PAD + CELL + GAP, y0, `N=${n} purity`);
  });
  return doc.render();
}
