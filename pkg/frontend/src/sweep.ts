/**
 * Viscosity-sweep convergence plot: E(nu) against nu on log-log axes with
 * the fitted slope annotated, for both the particle sup distance and the
 * velocity L2 distance.
 */

import { column, parseCsv } from "./formats";
import { fmt, frame, Scale, SERIES_COLORS, SvgCanvas } from "./svg";

export function fitSlope(xs: number[], ys: number[]): number {
  const lx = xs.map(Math.log);
  const ly = ys.map(Math.log);
  const n = xs.length;
  const mx = lx.reduce((a, b) => a + b, 0) / n;
  const my = ly.reduce((a, b) => a + b, 0) / n;
  let num = 0;
  let den = 0;
  for (let i = 0; i < n; i++) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) ** 2;
  }
  return num / den;
}

export function renderSweep(csvText: string, path: string): string {
  const table = parseCsv(csvText, path, ["nu", "eta_sup", "u_l2"]);
  const nu = column(table, "nu") as number[];
  const etaSup = column(table, "eta_sup") as number[];
  const uL2 = column(table, "u_l2") as number[];
  if (nu.length < 2) {
    throw new Error(`${path}: sweep plot needs at least two viscosities`);
  }
  const canvas = new SvgCanvas();
  const all = [...etaSup, ...uL2].filter((v) => v > 0);
  const x = new Scale(Math.min(...nu) / 2, Math.max(...nu) * 2, 70, 690, true);
  const y = new Scale(Math.min(...all) / 3, Math.max(...all) * 3, 440, 40, true);
  frame(canvas, x, y, "nu", "E(nu)", "vanishing-viscosity convergence");
  const seriesDefs: [string, number[]][] = [["eta sup distance", etaSup], ["u L2 distance", uL2]];
  seriesDefs.forEach(([label, values], i) => {
    const color = SERIES_COLORS[i];
    const slope = fitSlope(nu, values);
    values.forEach((v, j) => canvas.circle(x.at(nu[j]), y.at(v), 4, color));
    canvas.polyline(values.map((v, j) => [x.at(nu[j]), y.at(v)] as [number, number]), color, 1);
    canvas.text(90, 52 + 16 * i, `${label}: fitted slope ${fmt(slope)}`, 11, "start", color);
  });
  return canvas.render();
}
