#!/usr/bin/env node
import { runPlot, readText } from "./cli";
import { renderSweep } from "./sweep";

const rc = runPlot(
  "torusflow-plot-sweep <sweep.csv> <out.svg>",
  process.argv.slice(2),
  2,
  (args) => renderSweep(readText(args[0]), args[0]),
);
process.exit(rc);
