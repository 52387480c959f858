import { column, parseTable } from './csv.js';
import { RunData } from './manifest.js';
import { fmt, SvgDoc } from './svg.js';

const BAR_PANEL_W = 420;
const BAR_PANEL_H = 200;
const PAD = 60;

interface Spectrum {
  js: number[];
  occ: Map<number, number>;
}

function readSpectrum(run: RunData, file: string): Spectrum {
  const table = parseTable(run.readText(file), file);
  const ij = column(table, 'j', file);
  const io = column(table, 'occupation', file);
  const occ = new Map<number, number>();
  for (const row of table.rows) {
    occ.set(row[ij], row[io]);
  }
  return { js: [...occ.keys()].sort((a, b) => a - b), occ };
}

function drawSpectra(doc: SvgDoc, a: Spectrum, b: Spectrum, y0: number): void {
  const js = [...new Set([...a.js, ...b.js])].sort((x, y) => x - y);
  const groupW = BAR_PANEL_W / js.length;
  const barW = groupW * 0.3;
  const peak = Math.max(
    ...js.map((j) => Math.max(a.occ.get(j) ?? 0, b.occ.get(j) ?? 0)),
  );
  const base = y0 + BAR_PANEL_H;
  js.forEach((j, i) => {
    const xg = PAD + i * groupW + groupW / 2;
    const ha = ((a.occ.get(j) ?? 0) / peak) * BAR_PANEL_H;
    const hb = ((b.occ.get(j) ?? 0) / peak) * BAR_PANEL_H;
    doc.rect(xg - barW - 1, base - ha, barW, ha, '#3b6fb0');
    doc.rect(xg + 1, base - hb, barW, hb, '#d08a2e');
    doc.text(xg, base + 14, `${j}`, 10, 'middle');
  });
  doc.line(PAD, base, PAD + BAR_PANEL_W, base, '#000000');
  doc.text(PAD, y0 - 8, 'sideband occupations (blue phi1, orange phi2)', 12);
  doc.text(PAD + BAR_PANEL_W / 2, base + 30, 'sideband index j', 10, 'middle');
}

function drawReconstruction(doc: SvgDoc, rec: Record<string, number>, y0: number): void {
  const entries: [string, number][] = [
    ['z', rec.z],
    ['Re d', rec.d_re],
    ['Im d', rec.d_im],
    ['purity', rec.purity],
  ];
  const groupW = BAR_PANEL_W / entries.length;
  const mid = y0 + BAR_PANEL_H / 2;
  const scale = BAR_PANEL_H / 2;
  entries.forEach(([label, value], i) => {
    const x = PAD + i * groupW + groupW * 0.25;
    const h = Math.abs(value) * scale;
    const y = value >= 0 ? mid - h : mid;
    doc.rect(x, y, groupW * 0.5, h, value >= 0 ? '#3b6fb0' : '#b04a3b');
    doc.text(x + groupW * 0.25, y0 + BAR_PANEL_H + 14, label, 10, 'middle');
    doc.text(x + groupW * 0.25, y0 - 2, fmt(value), 9, 'middle');
  });
  doc.line(PAD, mid, PAD + BAR_PANEL_W, mid, '#000000');
  doc.text(PAD, y0 - 16, 'reconstructed state', 12);
}

/** Grouped spectra bars for the two modulation phases plus the
 * reconstruction summary bars. */
export function renderFig4(run: RunData): string {
  const a = readSpectrum(run, 'spectrum_phi1.csv');
  const b = readSpectrum(run, 'spectrum_phi2.csv');
  const rec = JSON.parse(run.readText('reconstruction.json')) as Record<string, number>;
  for (const key of ['z', 'd_re', 'd_im', 'purity']) {
    if (typeof rec[key] !== 'number') {
      throw new Error(`reconstruction.json missing numeric field ${key}`);
    }
  }
  const height = PAD * 2 + 2 * BAR_PANEL_H + 110;
  const doc = new SvgDoc(PAD * 2 + BAR_PANEL_W, height);
  drawSpectra(doc, a, b, PAD);
  drawReconstruction(doc, rec, PAD + BAR_PANEL_H + 90);
  return doc.render();
}
