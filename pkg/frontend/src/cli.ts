/**
 * Shared one-shot CLI plumbing.  Exit codes mirror the solver CLI:
 * 0 success, 1 malformed input or render failure, 2 usage error.
 */

import { readFileSync, writeFileSync } from "fs";
import { FormatError } from "./formats";

export function runPlot(
  usage: string,
  argv: string[],
  minArgs: number,
  render: (args: string[]) => string,
): number {
  if (argv.length < minArgs) {
    process.stderr.write(`usage: ${usage}\n`);
    return 2;
  }
  const outPath = argv[argv.length - 1];
  try {
    const svg = render(argv);
    writeFileSync(outPath, svg);
    return 0;
  } catch (err) {
    if (err instanceof FormatError || err instanceof Error) {
      process.stderr.write(`error: ${err.message}\n`);
      return 1;
    }
    throw err;
  }
}

export function readText(path: string): string {
  return readFileSync(path, "utf8");
}

export function readBytes(path: string): Buffer {
  return readFileSync(path);
}
