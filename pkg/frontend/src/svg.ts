/**
 * Minimal deterministic SVG assembly: fixed canvas, fixed fonts, numbers
 * rendered through one formatter, nothing time- or locale-dependent.
 */

export const WIDTH = 720;
export const HEIGHT = 480;

export function fmt(x: number): string {
  if (x === 0) return "0";
  const abs = Math.abs(x);
  if (abs >= 1e4 || abs < 1e-3) return x.toExponential(3);
  return String(Number(x.toPrecision(6)));
}

export class SvgCanvas {
  private parts: string[] = [];

  constructor(readonly width = WIDTH, readonly height = HEIGHT) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
        `viewBox="0 0 ${width} ${height}" font-family="monospace">`,
      `<rect width="${width}" height="${height}" fill="white"/>`,
    );
  }

  raw(fragment: string): void {
    this.parts.push(fragment);
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1): void {
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ` +
        `stroke="${stroke}" stroke-width="${width}"/>`,
    );
  }

  polyline(points: [number, number][], stroke: string, width = 1.5): void {
    const body = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.parts.push(
      `<polyline points="${body}" fill="none" stroke="${stroke}" stroke-width="${width}"/>`,
    );
  }

  circle(cx: number, cy: number, r: number, fill: string): void {
    this.parts.push(`<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${fmt(r)}" fill="${fill}"/>`);
  }

  rect(x: number, y: number, w: number, h: number, fill: string): void {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}"/>`,
    );
  }

  text(x: number, y: number, s: string, size = 12, anchor = "start", fill = "black"): void {
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" font-size="${size}" text-anchor="${anchor}" ` +
        `fill="${fill}">${escapeXml(s)}</text>`,
    );
  }

  render(): string {
    return this.parts.join("\n") + "\n</svg>\n";
  }
}

export function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

/** Linear or log axis mapping data values onto pixel coordinates. */
export class Scale {
  constructor(
    readonly lo: number,
    readonly hi: number,
    readonly pixLo: number,
    readonly pixHi: number,
    readonly log = false,
  ) {}

  at(v: number): number {
    const [a, b] = this.log ? [Math.log10(this.lo), Math.log10(this.hi)] : [this.lo, this.hi];
    const x = this.log ? Math.log10(v) : v;
    const t = b === a ? 0.5 : (x - a) / (b - a);
    return this.pixLo + t * (this.pixHi - this.pixLo);
  }

  ticks(count = 6): number[] {
    if (this.log) {
      const lo = Math.ceil(Math.log10(this.lo));
      const hi = Math.floor(Math.log10(this.hi));
      const step = Math.max(1, Math.floor((hi - lo) / count) || 1);
      const out: number[] = [];
      for (let e = lo; e <= hi; e += step) out.push(Math.pow(10, e));
      return out;
    }
    const span = this.hi - this.lo;
    if (span <= 0) return [this.lo];
    const step = Math.pow(10, Math.floor(Math.log10(span / count)));
    const mult = span / count / step >= 5 ? 5 : span / count / step >= 2 ? 2 : 1;
    const inc = step * mult;
    const start = Math.ceil(this.lo / inc) * inc;
    const out: number[] = [];
    for (let v = start; v <= this.hi + 1e-12 * span; v += inc) out.push(v);
    return out;
  }
}

export const SERIES_COLORS = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf",
];

/** Symmetric blue-white-red map for signed fields; t in [-1, 1]. */
export function diverging(t: number): string {
  const clamp = (v: number) => Math.max(0, Math.min(255, Math.round(v)));
  const s = Math.max(-1, Math.min(1, t));
  const r = s >= 0 ? 255 : 255 * (1 + s);
  const b = s <= 0 ? 255 : 255 * (1 - s);
  const g = 255 * (1 - Math.abs(s));
  return `rgb(${clamp(r)},${clamp(g)},${clamp(b)})`;
}

export function frame(
  canvas: SvgCanvas,
  x: Scale,
  y: Scale,
  xLabel: string,
  yLabel: string,
  title: string,
): void {
  const [left, right, top, bottom] = [x.pixLo, x.pixHi, y.pixHi, y.pixLo];
  canvas.line(left, bottom, right, bottom, "black");
  canvas.line(left, bottom, left, top, "black");
  for (const t of x.ticks()) {
    const px = x.at(t);
    canvas.line(px, bottom, px, bottom + 4, "black");
    canvas.text(px, bottom + 16, fmt(t), 10, "middle");
  }
  for (const t of y.ticks()) {
    const py = y.at(t);
    canvas.line(left - 4, py, left, py, "black");
    canvas.text(left - 6, py + 3, fmt(t), 10, "end");
  }
  canvas.text((left + right) / 2, bottom + 32, xLabel, 12, "middle");
  canvas.text(14, (top + bottom) / 2, yLabel, 12, "middle");
  canvas.text((left + right) / 2, 20, title, 14, "middle");
}
