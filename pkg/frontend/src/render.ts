/** render(figure id, in dir, out dir, format) -> image file on disk.
 *
 * A strict CSV consumer: nothing is recomputed, the picture is a pure
 * function of the simulator's output files.
 */

import { mkdirSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { loadFigure, LoadedFigure } from "./figures.js";
import { layout } from "./plot.js";
import { encodePng } from "./png.js";
import { rasterize } from "./raster.js";
import { renderSvg } from "./svg.js";

export type Format = "svg" | "png";

export interface RenderResult {
  path: string;
  figure: LoadedFigure;
}

export function render(id: string, inDir: string, outDir: string,
                       format: Format): RenderResult {
  if (format !== "svg" && format !== "png") {
    throw new Error(`format must be svg or png, got ${format}`);
  }
  const figure = loadFigure(id, inDir);
  const model = layout(figure.input);
  mkdirSync(outDir, { recursive: true });
  const path = join(outDir, `fig${id}.${format}`);
  if (format === "svg") {
    writeFileSync(path, renderSvg(model), "utf-8");
  } else {
    const canvas = rasterize(model);
    writeFileSync(path, encodePng(canvas.width, canvas.height, canvas.pixels));
  }
  return { path, figure };
}
