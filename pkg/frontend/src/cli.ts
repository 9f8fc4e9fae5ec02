#!/usr/bin/env node
/** CLI: render --figure <id> --in <dir> --out <dir> --format svg|png */

import { FIGURE_IDS } from "./figures.js";
import { render, Format } from "./render.js";

const USAGE =
  "usage: render --figure <2|3|4a|4b|5> --in <dir> [--out <dir>] [--format svg|png]";

interface Args {
  figure: string;
  inDir: string;
  outDir: string;
  format: Format;
}

export function parseArgs(argv: string[]): Args {
  const args = [...argv];
  if (args[0] === "render") args.shift();
  let figure: string | undefined;
  let inDir: string | undefined;
  let outDir = ".";
  let format: string = "svg";
  for (let i = 0; i < args.length; i++) {
    const flag = args[i];
    const value = args[i + 1];
    switch (flag) {
      case "--figure":
      case "--in":
      case "--out":
      case "--format": {
        if (value === undefined) throw new Error(`${flag} needs a value\n${USAGE}`);
        if (flag === "--figure") figure = value;
        else if (flag === "--in") inDir = value;
        else if (flag === "--out") outDir = value;
        else format = value;
        i++;
        break;
      }
      default:
        throw new Error(`unknown argument ${flag}\n${USAGE}`);
    }
  }
  if (figure === undefined || inDir === undefined) {
    throw new Error(`--figure and --in are required\n${USAGE}`);
  }
  if (!(FIGURE_IDS as readonly string[]).includes(figure)) {
    throw new Error(`unknown figure id ${figure}; expected ${FIGURE_IDS.join(", ")}`);
  }
  if (format !== "svg" && format !== "png") {
    throw new Error(`--format must be svg or png, got ${format}`);
  }
  return { figure, inDir, outDir, format };
}

export function main(argv: string[]): number {
  let parsed: Args;
  try {
    parsed = parseArgs(argv);
  } catch (err) {
    console.error((err as Error).message);
    return 2;
  }
  try {
    const result = render(parsed.figure, parsed.inDir, parsed.outDir, parsed.format);
    console.log(result.path);
    return 0;
  } catch (err) {
    console.error((err as Error).message);
    return 1;
  }
}

const isDirectRun = process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (isDirectRun) {
  process.exit(main(process.argv.slice(2)));
}
