/**
 * Heatmap of one component of a field snapshot on the periodic square,
 * optionally overlaid with flow-map particle positions (wrapped into the
 * fundamental domain).  Colors use a symmetric diverging map around zero.
 */

import { FieldSnapshot, FlowMapSnapshot } from "./formats";
import { diverging, fmt, SvgCanvas } from "./svg";

const TWO_PI = 2 * Math.PI;
const PLOT = { left: 60, top: 40, size: 400 };

export function renderHeatmap(
  field: FieldSnapshot,
  componentIndex: number,
  particles: FlowMapSnapshot | null,
  title: string,
): string {
  if (componentIndex < 0 || componentIndex >= field.ncomp) {
    throw new Error(`component ${componentIndex} out of range (snapshot has ${field.ncomp})`);
  }
  const n = field.n;
  const data = field.components[componentIndex];
  let peak = 0;
  for (const v of data) peak = Math.max(peak, Math.abs(v));
  const scale = peak === 0 ? 1 : peak;
  const canvas = new SvgCanvas(PLOT.left + PLOT.size + 160, PLOT.top + PLOT.size + 60);
  canvas.text(PLOT.left + PLOT.size / 2, 24, title, 14, "middle");
  const cell = PLOT.size / n;
  for (let iy = 0; iy < n; iy++) {
    for (let ix = 0; ix < n; ix++) {
      const v = data[iy * n + ix];
      // y axis points up: node (ix, iy) sits at physical (2pi ix/n, 2pi iy/n)
      canvas.rect(
        PLOT.left + ix * cell,
        PLOT.top + PLOT.size - (iy + 1) * cell,
        cell + 0.5,
        cell + 0.5,
        diverging(v / scale),
      );
    }
  }
  if (particles) {
    for (const rec of particles.records) {
      const px = ((rec[0] % TWO_PI) + TWO_PI) % TWO_PI;
      const py = ((rec[1] % TWO_PI) + TWO_PI) % TWO_PI;
      canvas.circle(
        PLOT.left + (px / TWO_PI) * PLOT.size,
        PLOT.top + PLOT.size - (py / TWO_PI) * PLOT.size,
        1.6,
        "black",
      );
    }
  }
  // frame and color-bar legend
  canvas.raw(
    `<rect x="${PLOT.left}" y="${PLOT.top}" width="${PLOT.size}" height="${PLOT.size}" ` +
      `fill="none" stroke="black"/>`,
  );
  const barX = PLOT.left + PLOT.size + 30;
  const steps = 32;
  for (let i = 0; i < steps; i++) {
    const t = 1 - (2 * i) / (steps - 1);
    canvas.rect(barX, PLOT.top + (i * PLOT.size) / steps, 18, PLOT.size / steps + 0.5, diverging(t));
  }
  canvas.text(barX + 24, PLOT.top + 10, fmt(peak), 10);
  canvas.text(barX + 24, PLOT.top + PLOT.size / 2 + 4, "0", 10);
  canvas.text(barX + 24, PLOT.top + PLOT.size, fmt(-peak), 10);
  canvas.text(PLOT.left + PLOT.size / 2, PLOT.top + PLOT.size + 28, `t = ${fmt(field.time)}`, 11, "middle");
  return canvas.render();
}
