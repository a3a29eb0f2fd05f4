#!/usr/bin/env node
import { runPlot, readText } from "./cli";
import { renderDrift } from "./drift";

const rc = runPlot(
  "torusflow-plot-drift <diagnostics.csv> <out.svg>",
  process.argv.slice(2),
  2,
  (args) => renderDrift(readText(args[0]), args[0]),
);
process.exit(rc);
