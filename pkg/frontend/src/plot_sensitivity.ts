#!/usr/bin/env node
import { runPlot, readText } from "./cli";
import { renderSensitivity } from "./sensitivity";

const rc = runPlot(
  "torusflow-plot-sensitivity <sensitivity.csv> <out.svg>",
  process.argv.slice(2),
  2,
  (args) => renderSensitivity(readText(args[0]), args[0]),
);
process.exit(rc);
