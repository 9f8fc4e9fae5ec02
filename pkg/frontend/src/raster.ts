/** Software rasterizer for the PNG backend: RGB framebuffer, stamped
 * thick lines with dash support, and a built-in 5x7 bitmap font so label
 * rendering needs no system fonts (pixel output stays deterministic). */

import { PlotModel, LineStyle } from "./plot.js";

// Glyphs are 5 columns x 7 rows; 'X' marks a lit pixel.  Only characters
// used by figure labels are defined; rendering an unknown character is an
// error so a missing glyph cannot silently produce blank text.
const GLYPHS: Record<string, string[]> = {
  " ": [".....", ".....", ".....", ".....", ".....", ".....", "....."],
  "-": [".....", ".....", ".....", "XXXX.", ".....", ".....", "....."],
  ".": [".....", ".....", ".....", ".....", ".....", ".XX..", ".XX.."],
  ",": [".....", ".....", ".....", ".....", "..X..", "..X..", ".X..."],
  "(": ["...X.", "..X..", ".X...", ".X...", ".X...", "..X..", "...X."],
  ")": [".X...", "..X..", "...X.", "...X.", "...X.", "..X..", ".X..."],
  "/": ["....X", "...X.", "...X.", "..X..", ".X...", ".X...", "X...."],
  "=": [".....", ".....", "XXXXX", ".....", "XXXXX", ".....", "....."],
  "+": [".....", "..X..", "..X..", "XXXXX", "..X..", "..X..", "....."],
  ":": [".....", ".XX..", ".XX..", ".....", ".XX..", ".XX..", "....."],
  "0": [".XXX.", "X...X", "X..XX", "X.X.X", "XX..X", "X...X", ".XXX."],
  "1": ["..X..", ".XX..", "..X..", "..X..", "..X..", "..X..", ".XXX."],
  "2": [".XXX.", "X...X", "....X", "...X.", "..X..", ".X...", "XXXXX"],
  "3": [".XXX.", "X...X", "....X", "..XX.", "....X", "X...X", ".XXX."],
  "4": ["...X.", "..XX.", ".X.X.", "X..X.", "XXXXX", "...X.", "...X."],
  "5": ["XXXXX", "X....", "XXXX.", "....X", "....X", "X...X", ".XXX."],
  "6": ["..XX.", ".X...", "X....", "XXXX.", "X...X", "X...X", ".XXX."],
  "7": ["XXXXX", "....X", "...X.", "..X..", "..X..", "..X..", "..X.."],
  "8": [".XXX.", "X...X", "X...X", ".XXX.", "X...X", "X...X", ".XXX."],
  "9": [".XXX.", "X...X", "X...X", ".XXXX", "....X", "...X.", ".XX.."],
  a: [".....", ".....", ".XXX.", "....X", ".XXXX", "X...X", ".XXXX"],
  b: ["X....", "X....", "XXXX.", "X...X", "X...X", "X...X", "XXXX."],
  c: [".....", ".....", ".XXX.", "X....", "X....", "X...X", ".XXX."],
  d: ["....X", "....X", ".XXXX", "X...X", "X...X", "X...X", ".XXXX"],
  e: [".....", ".....", ".XXX.", "X...X", "XXXXX", "X....", ".XXX."],
  f: ["..XX.", ".X..X", ".X...", "XXX..", ".X...", ".X...", ".X..."],
  g: [".....", ".XXXX", "X...X", "X...X", ".XXXX", "....X", ".XXX."],
  h: ["X....", "X....", "XXXX.", "X...X", "X...X", "X...X", "X...X"],
  i: ["..X..", ".....", ".XX..", "..X..", "..X..", "..X..", ".XXX."],
  j: ["...X.", ".....", "..XX.", "...X.", "...X.", "X..X.", ".XX.."],
  k: ["X....", "X....", "X..X.", "X.X..", "XX...", "X.X..", "X..X."],
  l: [".XX..", "..X..", "..X..", "..X..", "..X..", "..X..", ".XXX."],
  m: [".....", ".....", "XX.X.", "X.X.X", "X.X.X", "X.X.X", "X.X.X"],
  n: [".....", ".....", "XXXX.", "X...X", "X...X", "X...X", "X...X"],
  o: [".....", ".....", ".XXX.", "X...X", "X...X", "X...X", ".XXX."],
  p: [".....", "XXXX.", "X...X", "X...X", "XXXX.", "X....", "X...."],
  q: [".....", ".XXXX", "X...X", "X...X", ".XXXX", "....X", "....X"],
  r: [".....", ".....", "X.XX.", "XX..X", "X....", "X....", "X...."],
  s: [".....", ".....", ".XXXX", "X....", ".XXX.", "....X", "XXXX."],
  t: [".X...", ".X...", "XXX..", ".X...", ".X...", ".X..X", "..XX."],
  u: [".....", ".....", "X...X", "X...X", "X...X", "X...X", ".XXXX"],
  v: [".....", ".....", "X...X", "X...X", "X...X", ".X.X.", "..X.."],
  w: [".....", ".....", "X...X", "X...X", "X.X.X", "X.X.X", ".X.X."],
  x: [".....", ".....", "X...X", ".X.X.", "..X..", ".X.X.", "X...X"],
  y: [".....", "X...X", "X...X", ".XXXX", "....X", "X...X", ".XXX."],
  z: [".....", ".....", "XXXXX", "...X.", "..X..", ".X...", "XXXXX"],
  D: ["XXXX.", "X...X", "X...X", "X...X", "X...X", "X...X", "XXXX."],
  E: ["XXXXX", "X....", "X....", "XXXX.", "X....", "X....", "XXXXX"],
  F: ["XXXXX", "X....", "X....", "XXXX.", "X....", "X....", "X...."],
  G: [".XXX.", "X....", "X....", "X.XXX", "X...X", "X...X", ".XXXX"],
  I: [".XXX.", "..X..", "..X..", "..X..", "..X..", "..X..", ".XXX."],
  N: ["X...X", "XX..X", "X.X.X", "X..XX", "X...X", "X...X", "X...X"],
  O: [".XXX.", "X...X", "X...X", "X...X", "X...X", "X...X", ".XXX."],
  P: ["XXXX.", "X...X", "X...X", "XXXX.", "X....", "X....", "X...."],
  R: ["XXXX.", "X...X", "X...X", "XXXX.", "X.X..", "X..X.", "X...X"],
  S: [".XXXX", "X....", "X....", ".XXX.", "....X", "....X", "XXXX."],
  T: ["XXXXX", "..X..", "..X..", "..X..", "..X..", "..X..", "..X.."],
  U: ["X...X", "X...X", "X...X", "X...X", "X...X", "X...X", ".XXX."],
  W: ["X...X", "X...X", "X...X", "X.X.X", "X.X.X", "XX.XX", "X...X"],
};

export const GLYPH_W = 5;
export const GLYPH_H = 7;
const ADVANCE = 6; // columns per character including spacing

export function parseColor(hex: string): [number, number, number] {
  const m = /^#([0-9a-fA-F]{6})$/.exec(hex);
  if (!m) throw new Error(`bad color ${hex}`);
  const n = parseInt(m[1], 16);
  return [(n >> 16) & 0xff, (n >> 8) & 0xff, n & 0xff];
}

export class Canvas {
  readonly width: number;
  readonly height: number;
  readonly pixels: Uint8Array; // RGB, row major

  constructor(width: number, height: number) {
    this.width = width;
    this.height = height;
    this.pixels = new Uint8Array(width * height * 3).fill(255);
  }

  set(x: number, y: number, rgb: [number, number, number]): void {
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const i = (y * this.width + x) * 3;
    this.pixels[i] = rgb[0];
    this.pixels[i + 1] = rgb[1];
    this.pixels[i + 2] = rgb[2];
  }

  get(x: number, y: number): [number, number, number] {
    const i = (y * this.width + x) * 3;
    return [this.pixels[i], this.pixels[i + 1], this.pixels[i + 2]];
  }

  /** Stamp a filled disc; radius in pixels. */
  disc(cx: number, cy: number, r: number, rgb: [number, number, number]): void {
    const r2 = r * r;
    for (let y = Math.floor(cy - r); y <= Math.ceil(cy + r); y++) {
      for (let x = Math.floor(cx - r); x <= Math.ceil(cx + r); x++) {
        const dx = x - cx;
        const dy = y - cy;
        if (dx * dx + dy * dy <= r2) this.set(x, y, rgb);
      }
    }
  }

  /** Thick line with an on/off dash pattern in pixel units. */
  line(x0: number, y0: number, x1: number, y1: number, style: LineStyle): void {
    const rgb = parseColor(style.color);
    const len = Math.hypot(x1 - x0, y1 - y0);
    const r = Math.max(0.5, style.width / 2);
    const period = style.dash.reduce((a, b) => a + b, 0);
    const steps = Math.max(1, Math.ceil(len / 0.5));
    for (let i = 0; i <= steps; i++) {
      const s = (i / steps) * len;
      if (period > 0) {
        let phase = s % period;
        let on = true;
        for (const run of style.dash) {
          if (phase < run) break;
          phase -= run;
          on = !on;
        }
        if (!on) continue;
      }
      const t = i / steps;
      this.disc(x0 + t * (x1 - x0), y0 + t * (y1 - y0), r, rgb);
    }
  }

  polyline(points: Array<[number, number]>, style: LineStyle): void {
    // dash phase continues across segments of one polyline
    if (style.dash.length === 0) {
      for (let i = 1; i < points.length; i++) {
        this.line(points[i - 1][0], points[i - 1][1],
                  points[i][0], points[i][1], style);
      }
      return;
    }
    const rgb = parseColor(style.color);
    const r = Math.max(0.5, style.width / 2);
    const period = style.dash.reduce((a, b) => a + b, 0);
    let arc = 0;
    for (let i = 1; i < points.length; i++) {
      const [ax, ay] = points[i - 1];
      const [bx, by] = points[i];
      const len = Math.hypot(bx - ax, by - ay);
      const steps = Math.max(1, Math.ceil(len / 0.5));
      for (let k = 0; k <= steps; k++) {
        const s = arc + (k / steps) * len;
        let phase = s % period;
        let on = true;
        for (const run of style.dash) {
          if (phase < run) break;
          phase -= run;
          on = !on;
        }
        if (!on) continue;
        const t = k / steps;
        this.disc(ax + t * (bx - ax), ay + t * (by - ay), r, rgb);
      }
      arc += len;
    }
  }

  text(x: number, y: number, s: string, scale: number,
       rgb: [number, number, number]): void {
    let cx = Math.round(x);
    const cy = Math.round(y);
    for (const ch of s) {
      const glyph = GLYPHS[ch];
      if (glyph === undefined) {
        throw new Error(`no glyph for character ${JSON.stringify(ch)} in ${JSON.stringify(s)}`);
      }
      for (let gy = 0; gy < GLYPH_H; gy++) {
        for (let gx = 0; gx < GLYPH_W; gx++) {
          if (glyph[gy][gx] !== "X") continue;
          for (let sy = 0; sy < scale; sy++) {
            for (let sx = 0; sx < scale; sx++) {
              this.set(cx + gx * scale + sx, cy + gy * scale + sy, rgb);
            }
          }
        }
      }
      cx += ADVANCE * scale;
    }
  }
}

export function textWidth(s: string, scale: number): number {
  return s.length > 0 ? (s.length * ADVANCE - 1) * scale : 0;
}

const BLACK: [number, number, number] = [0, 0, 0];
const GRID: [number, number, number] = [221, 221, 221];

/** Draw a plot model onto a fresh canvas; same picture as the SVG path. */
export function rasterize(model: PlotModel): Canvas {
  const c = new Canvas(model.width, model.height);
  const { plot } = model;
  const solid = (width: number): LineStyle => ({ color: "#000000", width, dash: [] });

  // grid
  const gridStyle: LineStyle = { color: "#dddddd", width: 1, dash: [] };
  for (const t of model.xTicks) {
    c.line(t.pos, plot.y0, t.pos, plot.y1, gridStyle);
  }
  for (const t of model.yTicks) {
    c.line(plot.x0, t.pos, plot.x1, t.pos, gridStyle);
  }
  void GRID;

  // frame
  c.line(plot.x0, plot.y0, plot.x1, plot.y0, solid(1));
  c.line(plot.x0, plot.y1, plot.x1, plot.y1, solid(1));
  c.line(plot.x0, plot.y0, plot.x0, plot.y1, solid(1));
  c.line(plot.x1, plot.y0, plot.x1, plot.y1, solid(1));

  // ticks and labels
  for (const t of model.xTicks) {
    c.line(t.pos, plot.y1, t.pos, plot.y1 + 6, solid(1));
    c.text(t.pos - textWidth(t.label, 2) / 2, plot.y1 + 10, t.label, 2, BLACK);
  }
  for (const t of model.yTicks) {
    c.line(plot.x0 - 6, t.pos, plot.x0, t.pos, solid(1));
    c.text(plot.x0 - 10 - textWidth(t.label, 2), t.pos - 7, t.label, 2, BLACK);
  }

  // axis labels and title (x axis and title horizontal; y label stacked
  // near the top left to avoid rotated text)
  c.text((plot.x0 + plot.x1) / 2 - textWidth(model.xLabel, 2) / 2,
         model.height - 24, model.xLabel, 2, BLACK);
  c.text(6, plot.y0 - 24, model.yLabel, 2, BLACK);
  c.text((plot.x0 + plot.x1) / 2 - textWidth(model.title, 2) / 2, 8,
         model.title, 2, BLACK);

  // series
  for (const s of model.series) {
    c.polyline(s.points, s.style);
  }

  // legend
  const legendX = plot.x0 + 14;
  let legendY = plot.y0 + 12;
  for (const s of model.series) {
    c.line(legendX, legendY + 5, legendX + 34, legendY + 5, s.style);
    c.text(legendX + 42, legendY, s.label, 2, BLACK);
    legendY += 18;
  }

  // markers
  for (const m of model.markers) {
    c.disc(m.px, m.py, 5, parseColor(m.color));
    c.text(m.px + 10, m.py - 20, m.label, 2, BLACK);
  }
  return c;
}
