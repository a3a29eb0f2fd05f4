/**
 * Readers for the solver's documented on-disk formats.  These parsers are
 * the only coupling to the solver: byte layouts and CSV columns are the
 * contract, no solver code is imported.
 *
 * Field snapshot "FLD1": magic, u32 n, u32 ncomp, f64 time (little endian),
 * then ncomp blocks of n*n f64 with the x index fastest.
 * Flow-map snapshot "FMP1": magic, u32 m, f64 time, then m*m records of
 * (eta1, eta2, T11, T12, T21, T22, Tinv11, Tinv12, Tinv21, Tinv22) as f64,
 * x index fastest.
 */

export class FormatError extends Error {
  constructor(public path: string, message: string, public byteOffset?: number) {
    super(
      byteOffset === undefined
        ? `${path}: ${message}`
        : `${path}: ${message} (byte offset ${byteOffset})`,
    );
  }
}

export interface FieldSnapshot {
  n: number;
  ncomp: number;
  time: number;
  /** component-major, x fastest within a row: value(c, ix, iy) = data[c][iy * n + ix] */
  components: Float64Array[];
}

export function parseFieldSnapshot(buf: Buffer, path: string): FieldSnapshot {
  if (buf.length < 20) {
    throw new FormatError(path, "file too short for a field snapshot header", buf.length);
  }
  if (buf.toString("latin1", 0, 4) !== "FLD1") {
    throw new FormatError(path, "bad magic, expected FLD1", 0);
  }
  const n = buf.readUInt32LE(4);
  const ncomp = buf.readUInt32LE(8);
  const time = buf.readDoubleLE(12);
  const expect = 20 + ncomp * n * n * 8;
  if (buf.length !== expect) {
    throw new FormatError(path, `truncated: ${buf.length} bytes, expected ${expect}`, buf.length);
  }
  const components: Float64Array[] = [];
  for (let c = 0; c < ncomp; c++) {
    const block = new Float64Array(n * n);
    const base = 20 + c * n * n * 8;
    for (let i = 0; i < n * n; i++) {
      block[i] = buf.readDoubleLE(base + 8 * i);
    }
    components.push(block);
  }
  return { n, ncomp, time, components };
}

export interface FlowMapSnapshot {
  m: number;
  time: number;
  /** particle records, x index fastest; each row is the 10-value record */
  records: Float64Array[];
}

export function parseFlowMapSnapshot(buf: Buffer, path: string): FlowMapSnapshot {
  if (buf.length < 16) {
    throw new FormatError(path, "file too short for a flow-map snapshot header", buf.length);
  }
  if (buf.toString("latin1", 0, 4) !== "FMP1") {
    throw new FormatError(path, "bad magic, expected FMP1", 0);
  }
  const m = buf.readUInt32LE(4);
  const time = buf.readDoubleLE(8);
  const expect = 16 + m * m * 10 * 8;
  if (buf.length !== expect) {
    throw new FormatError(path, `truncated: ${buf.length} bytes, expected ${expect}`, buf.length);
  }
  const records: Float64Array[] = [];
  for (let p = 0; p < m * m; p++) {
    const rec = new Float64Array(10);
    for (let f = 0; f < 10; f++) {
      rec[f] = buf.readDoubleLE(16 + (p * 10 + f) * 8);
    }
    records.push(rec);
  }
  return { m, time, records };
}

/** A parsed CSV with a header row; empty cells become null. */
export interface Table {
  columns: string[];
  rows: (number | null)[][];
}

export function parseCsv(text: string, path: string, requiredColumns: string[]): Table {
  const lines = text.split(/\r?\n/).filter((ln) => ln.trim().length > 0);
  if (lines.length === 0) {
    throw new FormatError(path, "empty CSV");
  }
  const columns = lines[0].split(",");
  for (const col of requiredColumns) {
    if (!columns.includes(col)) {
      throw new FormatError(path, `missing column '${col}' in header '${lines[0]}'`);
    }
  }
  const rows: (number | null)[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== columns.length) {
      throw new FormatError(path, `row ${i + 1} has ${parts.length} cells, expected ${columns.length}`);
    }
    rows.push(
      parts.map((cell) => {
        if (cell === "") return null;
        const value = Number(cell);
        if (!Number.isFinite(value)) {
          throw new FormatError(path, `row ${i + 1}: cannot parse '${cell}' as a number`);
        }
        return value;
      }),
    );
  }
  return { columns, rows };
}

export const DIAGNOSTIC_COLUMNS = [
  "t", "energy", "enstrophy", "omega_max", "q_mean", "q_l2", "q_max",
  "hs_norm", "grad_u_max", "log_bound_ratio", "volume_defect",
  "inverse_defect", "tangent_monitor",
];

export function column(table: Table, name: string): (number | null)[] {
  const idx = table.columns.indexOf(name);
  return table.rows.map((row) => row[idx]);
}
