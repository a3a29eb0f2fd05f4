/**
 * Conservation-drift time series from a diagnostics CSV: relative drift of
 * each conserved quantity against its t=0 value, on a log y scale.
 */

import { column, DIAGNOSTIC_COLUMNS, parseCsv, Table } from "./formats";
import { fmt, frame, Scale, SERIES_COLORS, SvgCanvas } from "./svg";

const TRACKED = ["energy", "enstrophy", "omega_max", "q_l2", "q_max"];
const FLOOR = 1e-17;

export interface DriftSeries {
  name: string;
  t: number[];
  drift: number[];
}

export function driftSeries(table: Table): DriftSeries[] {
  const t = column(table, "t").map((v) => v ?? 0);
  const out: DriftSeries[] = [];
  for (const name of TRACKED) {
    const values = column(table, name);
    if (values[0] === null || values[0] === undefined) continue;
    const ref = values[0] as number;
    const scale = Math.max(Math.abs(ref), FLOOR);
    const drift = values.map((v) => Math.max(Math.abs((v as number) - ref) / scale, FLOOR));
    out.push({ name, t, drift });
  }
  return out;
}

export function renderDrift(csvText: string, path: string): string {
  const table = parseCsv(csvText, path, DIAGNOSTIC_COLUMNS);
  const series = driftSeries(table);
  const canvas = new SvgCanvas();
  const tMax = Math.max(...series.flatMap((s) => s.t), 1e-12);
  let hi = FLOOR * 10;
  for (const s of series) hi = Math.max(hi, ...s.drift);
  const x = new Scale(0, tMax, 70, 690, false);
  const y = new Scale(FLOOR, hi * 2, 440, 40, true);
  frame(canvas, x, y, "t", "drift", "relative conservation drift");
  series.forEach((s, i) => {
    const color = SERIES_COLORS[i % SERIES_COLORS.length];
    canvas.polyline(s.t.map((tv, j) => [x.at(tv), y.at(s.drift[j])] as [number, number]), color);
    canvas.text(600, 52 + 14 * i, `${s.name} (max ${fmt(Math.max(...s.drift))})`, 10, "start", color);
  });
  return canvas.render();
}
