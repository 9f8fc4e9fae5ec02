/** Geometry shared by the SVG and raster backends: a figure is reduced to
 * a plot model (scaled polylines, ticks, labels, markers) before either
 * backend touches it, so both emit the same picture. */

export interface LineStyle {
  color: string;            // #rrggbb
  width: number;            // px
  dash: number[];           // empty = solid, else on/off pixel runs
}

export interface SeriesData {
  label: string;
  x: number[];
  y: number[];
  style: LineStyle;
}

export interface Marker {
  x: number;
  y: number;
  label: string;
  color: string;
}

export interface PlotInput {
  title: string;
  xLabel: string;
  yLabel: string;
  series: SeriesData[];
  markers: Marker[];
  yMin?: number;
  yMax?: number;
}

export interface Tick {
  pos: number;      // pixel position
  label: string;
}

export interface PlotModel {
  width: number;
  height: number;
  plot: { x0: number; y0: number; x1: number; y1: number };
  title: string;
  xLabel: string;
  yLabel: string;
  xTicks: Tick[];
  yTicks: Tick[];
  series: Array<{ label: string; points: Array<[number, number]>; style: LineStyle }>;
  markers: Array<{ px: number; py: number; label: string; color: string }>;
}

export const WIDTH = 840;
export const HEIGHT = 560;
const MARGIN = { left: 76, right: 24, top: 40, bottom: 56 };

/** Tick values covering [lo, hi] at a 1/2/5 step, clipped to the range. */
export function niceTicks(lo: number, hi: number, target = 6): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step0 = span / target;
  const mag = Math.pow(10, Math.floor(Math.log10(step0)));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (m * mag >= step0) {
      step = m * mag;
      break;
    }
  }
  const ticks: number[] = [];
  const first = Math.ceil(lo / step - 1e-9) * step;
  for (let v = first; v <= hi + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

export function formatTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(1);
  const s = v.toPrecision(4);
  return s.includes(".") ? s.replace(/\.?0+$/, "") : s;
}

/** Scale the figure input into pixel space with padded nice axes. */
export function layout(input: PlotInput): PlotModel {
  if (input.series.length === 0) {
    throw new Error(`figure ${input.title}: no series to plot`);
  }
  let xMin = Infinity, xMax = -Infinity, yMin = Infinity, yMax = -Infinity;
  for (const s of input.series) {
    for (const v of s.x) {
      if (v < xMin) xMin = v;
      if (v > xMax) xMax = v;
    }
    for (const v of s.y) {
      if (v < yMin) yMin = v;
      if (v > yMax) yMax = v;
    }
  }
  if (input.yMin !== undefined) yMin = input.yMin;
  if (input.yMax !== undefined) yMax = input.yMax;
  if (xMax === xMin) xMax = xMin + 1;
  if (yMax === yMin) yMax = yMin + 1;
  const yPad = input.yMax === undefined ? 0.05 * (yMax - yMin) : 0;
  yMax += yPad;

  const plot = {
    x0: MARGIN.left,
    y0: MARGIN.top,
    x1: WIDTH - MARGIN.right,
    y1: HEIGHT - MARGIN.bottom,
  };
  const sx = (v: number) =>
    plot.x0 + ((v - xMin) / (xMax - xMin)) * (plot.x1 - plot.x0);
  const sy = (v: number) =>
    plot.y1 - ((v - yMin) / (yMax - yMin)) * (plot.y1 - plot.y0);

  return {
    width: WIDTH,
    height: HEIGHT,
    plot,
    title: input.title,
    xLabel: input.xLabel,
    yLabel: input.yLabel,
    xTicks: niceTicks(xMin, xMax).map((v) => ({ pos: sx(v), label: formatTick(v) })),
    yTicks: niceTicks(yMin, yMax).map((v) => ({ pos: sy(v), label: formatTick(v) })),
    series: input.series.map((s) => ({
      label: s.label,
      style: s.style,
      points: s.x.map((xv, i) => [sx(xv), sy(s.y[i])] as [number, number]),
    })),
    markers: input.markers.map((m) => ({
      px: sx(m.x),
      py: sy(m.y),
      label: m.label,
      color: m.color,
    })),
  };
}

/** Index of the maximum y value (first one on ties). */
export function argmax(y: number[]): number {
  let best = 0;
  for (let i = 1; i < y.length; i++) {
    if (y[i] > y[best]) best = i;
  }
  return best;
}
