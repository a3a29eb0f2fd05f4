#!/usr/bin/env node
/**
 * torusflow-plot-heatmap <field.fld> <out.svg> [--component N] [--particles <fm.fmp>]
 */
import { basename } from "path";
import { runPlot, readBytes } from "./cli";
import { parseFieldSnapshot, parseFlowMapSnapshot } from "./formats";
import { renderHeatmap } from "./heatmap";

const argv = process.argv.slice(2);
const positional: string[] = [];
let component = 0;
let particlesPath: string | null = null;
for (let i = 0; i < argv.length; i++) {
  if (argv[i] === "--component") {
    component = Number(argv[++i]);
  } else if (argv[i] === "--particles") {
    particlesPath = argv[++i];
  } else {
    positional.push(argv[i]);
  }
}

const rc = runPlot(
  "torusflow-plot-heatmap <field.fld> <out.svg> [--component N] [--particles <fm.fmp>]",
  positional,
  2,
  (args) => {
    const field = parseFieldSnapshot(readBytes(args[0]), args[0]);
    const particles = particlesPath
      ? parseFlowMapSnapshot(readBytes(particlesPath), particlesPath)
      : null;
    return renderHeatmap(field, component, particles, basename(args[0]));
  },
);
process.exit(rc);
