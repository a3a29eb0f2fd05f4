/**
 * Richardson table of the smooth-dependence study, rendered as an image:
 * one row per perturbation size with the finite-difference norms, the
 * successive differences, and their ratios (about 4 for a C^3 map).
 */

import { column, parseCsv } from "./formats";
import { fmt, SvgCanvas } from "./svg";

const COLUMNS = ["eps", "deriv_eta", "deriv_u", "diff_eta", "diff_u", "ratio_eta", "ratio_u"];

export function renderSensitivity(csvText: string, path: string): string {
  const table = parseCsv(csvText, path, COLUMNS);
  const canvas = new SvgCanvas(720, 120 + 24 * table.rows.length);
  canvas.text(360, 28, "smooth-dependence Richardson table", 14, "middle");
  canvas.text(360, 46, "D(eps) = central difference of the final state; ratio ~ 4 indicates C^3 dependence", 10, "middle");
  const xs = [60, 160, 260, 360, 460, 560, 660];
  COLUMNS.forEach((name, i) => canvas.text(xs[i], 74, name, 11, "middle"));
  canvas.line(30, 82, 690, 82, "black");
  table.rows.forEach((row, r) => {
    const yRow = 102 + 24 * r;
    COLUMNS.forEach((name, i) => {
      const idx = table.columns.indexOf(name);
      const value = row[idx];
      canvas.text(xs[i], yRow, value === null ? "-" : fmt(value), 11, "middle");
    });
  });
  const ratios = column(table, "ratio_eta").filter((v): v is number => v !== null);
  if (ratios.length > 0) {
    canvas.text(
      360,
      108 + 24 * table.rows.length,
      `leading eta ratio: ${fmt(ratios[0])}`,
      11,
      "middle",
    );
  }
  return canvas.render();
}
