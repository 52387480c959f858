/** Minimal deterministic SVG assembly: fixed-precision numbers, no
 * timestamps, elements emitted in a stable order. */

export function fmt(x: number): string {
  return Number(x.toFixed(3)).toString();
}

export class SvgDoc {
  private parts: string[] = [];

  constructor(
    readonly width: number,
    readonly height: number,
  ) {}

  rect(x: number, y: number, w: number, h: number, fill: string): void {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}"/>`,
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1): void {
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" stroke="${stroke}" stroke-width="${fmt(width)}"/>`,
    );
  }

  text(x: number, y: number, content: string, size = 12, anchor = 'start'): void {
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" font-family="sans-serif" font-size="${fmt(size)}" text-anchor="${anchor}">${escapeXml(content)}</text>`,
    );
  }

  render(): string {
    return [
      '<?xml version="1.0" encoding="UTF-8"?>',
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" viewBox="0 0 ${this.width} ${this.height}">`,
      `<rect x="0" y="0" width="${this.width}" height="${this.height}" fill="#ffffff"/>`,
      ...this.parts,
      '</svg>',
      '',
    ].join('\n');
  }
}

function escapeXml(s: string): string {
  return s
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;');
}

/** Blue-to-yellow sequential color for t in [0, 1]. */
export function heatColor(t: number): string {
  const u = Math.min(1, Math.max(0, t));
  const r = Math.round(35 + 220 * u);
  const g = Math.round(45 + 185 * u);
  const b = Math.round(120 + 30 * (1 - u) - 90 * u);
  return `rgb(${r},${g},${b})`;
}
