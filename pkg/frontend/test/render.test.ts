import { describe, expect, it } from "vitest";
import { execFileSync } from "child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import {
  column,
  parseCsv,
  DIAGNOSTIC_COLUMNS,
  parseFieldSnapshot,
  parseFlowMapSnapshot,
} from "../src/formats";
import { renderDrift } from "../src/drift";
import { renderSweep, fitSlope } from "../src/sweep";
import { renderSensitivity } from "../src/sensitivity";
import { renderHeatmap } from "../src/heatmap";

const FIXTURES = join(__dirname, "fixtures");

function fixture(...parts: string[]): string {
  return join(FIXTURES, ...parts);
}

describe("drift plot", () => {
  const text = readFileSync(fixture("tg_run", "diagnostics.csv"), "utf8");

  it("renders a taylor-green run with near-epsilon drifts", () => {
    const svg = renderDrift(text, "diagnostics.csv");
    expect(svg).toContain("<svg");
    expect(svg).toContain("energy");
    // steady state: every tracked drift stays at rounding level
    const table = parseCsv(text, "diagnostics.csv", DIAGNOSTIC_COLUMNS);
    const energy = column(table, "energy") as number[];
    const drift = Math.max(...energy.map((v) => Math.abs(v - energy[0]) / energy[0]));
    expect(drift).toBeLessThan(1e-10);
  });

  it("is deterministic", () => {
    expect(renderDrift(text, "a")).toBe(renderDrift(text, "a"));
  });
});

describe("sweep plot", () => {
  const text = readFileSync(fixture("sweep_run", "sweep.csv"), "utf8");

  it("renders three points and annotates a near-unit slope", () => {
    const svg = renderSweep(text, "sweep.csv");
    expect((svg.match(/<circle/g) ?? []).length).toBeGreaterThanOrEqual(6);
    expect(svg).toContain("fitted slope");
    const table = parseCsv(text, "sweep.csv", ["nu", "eta_sup", "u_l2"]);
    const slope = fitSlope(column(table, "nu") as number[], column(table, "eta_sup") as number[]);
    expect(slope).toBeGreaterThan(0.8);
  });

  it("rejects a single-row sweep", () => {
    expect(() => renderSweep("nu,eta_sup,u_l2\n0.1,1.0,1.0\n", "one.csv")).toThrowError(/two/);
  });
});

describe("sensitivity table", () => {
  it("renders rows with ratios near four", () => {
    const text = readFileSync(fixture("sens_run", "sensitivity.csv"), "utf8");
    const svg = renderSensitivity(text, "sensitivity.csv");
    expect(svg).toContain("Richardson");
    const table = parseCsv(text, "s.csv", ["eps", "ratio_eta"]);
    const ratio = column(table, "ratio_eta")[0] as number;
    expect(ratio).toBeGreaterThan(3.2);
    expect(ratio).toBeLessThan(4.8);
  });
});

describe("heatmap", () => {
  it("renders vertical stripes for a sin x field", () => {
    // build sin(x) directly: value depends on ix only
    const n = 16;
    const buf = Buffer.alloc(20 + n * n * 8);
    buf.write("FLD1", 0, "latin1");
    buf.writeUInt32LE(n, 4);
    buf.writeUInt32LE(1, 8);
    buf.writeDoubleLE(0, 12);
    for (let iy = 0; iy < n; iy++) {
      for (let ix = 0; ix < n; ix++) {
        buf.writeDoubleLE(Math.sin((2 * Math.PI * ix) / n), 20 + 8 * (iy * n + ix));
      }
    }
    const svg = renderHeatmap(parseFieldSnapshot(buf, "sinx"), 0, null, "sinx");
    // columns at x and x + half-period carry opposite colors; all rows alike
    const fills = [...svg.matchAll(/<rect x="([^"]+)" y="[^"]+" width="[^"]+" height="[^"]+" fill="(rgb[^"]+)"/g)];
    const byX = new Map<string, Set<string>>();
    for (const m of fills) {
      if (!byX.has(m[1])) byX.set(m[1], new Set());
      byX.get(m[1])!.add(m[2]);
    }
    const columnsWithOneColor = [...byX.values()].filter((s) => s.size === 1).length;
    expect(columnsWithOneColor).toBeGreaterThanOrEqual(n);
  });

  it("overlays particles from a real flow-map snapshot", () => {
    const { parseFlowMapSnapshot } = require("../src/formats");
    const field = parseFieldSnapshot(
      readFileSync(fixture("alpha_run", "q_final.fld")),
      "q_final.fld",
    );
    const fm = parseFlowMapSnapshot(
      readFileSync(fixture("alpha_run", "fm_final.fmp")),
      "fm_final.fmp",
    );
    const svg = renderHeatmap(field, 0, fm, "q");
    expect((svg.match(/<circle/g) ?? []).length).toBe(fm.m * fm.m);
  });
});

describe("command-line scripts", () => {
  const dist = join(__dirname, "..", "dist");
  const out = mkdtempSync(join(tmpdir(), "tfplot-"));

  function runScript(script: string, args: string[]): { status: number; bytes?: Buffer } {
    try {
      execFileSync("node", [join(dist, script), ...args], { stdio: "pipe" });
      return { status: 0 };
    } catch (err: any) {
      return { status: err.status };
    }
  }

  it("all four plot kinds render real outputs and are byte-identical on rerun", () => {
    const jobs: [string, string[]][] = [
      ["plot_drift.js", [fixture("tg_run", "diagnostics.csv")]],
      ["plot_sweep.js", [fixture("sweep_run", "sweep.csv")]],
      ["plot_sensitivity.js", [fixture("sens_run", "sensitivity.csv")]],
      [
        "plot_heatmap.js",
        [fixture("alpha_run", "q_final.fld"), "--particles", fixture("alpha_run", "fm_final.fmp")],
      ],
    ];
    for (const [script, args] of jobs) {
      const a = join(out, script + ".a.svg");
      const b = join(out, script + ".b.svg");
      expect(runScript(script, [...args.slice(0, 1), a, ...args.slice(1)]).status).toBe(0);
      expect(runScript(script, [...args.slice(0, 1), b, ...args.slice(1)]).status).toBe(0);
      expect(readFileSync(a)).toEqual(readFileSync(b));
      expect(readFileSync(a, "utf8")).toContain("<svg");
    }
  });

  it("missing arguments exit 2", () => {
    expect(runScript("plot_drift.js", []).status).toBe(2);
  });

  it("malformed input exits 1 with the path and offset", () => {
    const bad = join(out, "bad.fld");
    writeFileSync(bad, Buffer.from("FLD1 not really a snapshot"));
    const res = runScript("plot_heatmap.js", [bad, join(out, "x.svg")]);
    expect(res.status).toBe(1);
  });
});
