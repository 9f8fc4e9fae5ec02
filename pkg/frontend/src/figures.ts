/** Figure definitions: which CSV files feed each figure id, expected
 * headers, axis labels, line styles, and annotations. */

import { existsSync } from "node:fs";
import { join } from "node:path";

import { readSeries, Series, CsvError } from "./csv.js";
import { LineStyle, Marker, PlotInput, argmax } from "./plot.js";

export const FIGURE_IDS = ["2", "3", "4a", "4b", "5"] as const;
export type FigureId = (typeof FIGURE_IDS)[number];

export interface SeriesSpec {
  file: string;
  header: [string, string];
  label: string;
  style: LineStyle;
}

export interface FigureSpec {
  id: FigureId;
  title: string;
  xLabel: string;
  yLabel: string;
  series: SeriesSpec[];
  /** index of the series whose maximum gets an annotated marker */
  annotateMaxOf?: number;
  yMin?: number;
  yMax?: number;
}

const solid = (color: string, width = 2): LineStyle => ({ color, width, dash: [] });
const dashed = (color: string, width = 2): LineStyle => ({ color, width, dash: [8, 5] });
const dashdot = (color: string, width = 2): LineStyle => ({ color, width, dash: [10, 4, 2, 4] });
const dotted = (color: string, width = 2): LineStyle => ({ color, width, dash: [2, 4] });

const T_NS: [string, string] = ["t_ns", "eta"];
const DETUNE: [string, string] = ["delta_over_omega", "eta_at_td"];

export const FIGURES: Record<FigureId, FigureSpec> = {
  "2": {
    id: "2",
    title: "switching probability and detection efficiency, one photon",
    xLabel: "time (ns)",
    yLabel: "probability",
    series: [
      { file: "fig2_p1.csv", header: ["t_ns", "P_n"], label: "P1 (one photon)",
        style: solid("#d62728") },
      { file: "fig2_p0.csv", header: ["t_ns", "P_0"], label: "P0 (no photon)",
        style: solid("#000000", 1.5) },
      { file: "fig2_eta.csv", header: ["t_ns", "eta"], label: "eta = P1 - P0",
        style: solid("#1f77b4", 2.5) },
    ],
    annotateMaxOf: 2,
    yMin: 0,
  },
  "3": {
    id: "3",
    title: "detection efficiency vs detuning at the optimal time",
    xLabel: "detuning / Rabi frequency",
    yLabel: "efficiency",
    series: [
      { file: "fig3_x2.csv", header: DETUNE, label: "bias x = 2.0",
        style: solid("#1f77b4") },
      { file: "fig3_x1.9.csv", header: DETUNE, label: "bias x = 1.9",
        style: dashdot("#000000") },
      { file: "fig3_x1.8.csv", header: DETUNE, label: "bias x = 1.8",
        style: dashed("#d62728") },
    ],
    yMin: 0,
  },
  "4a": {
    id: "4a",
    title: "detection efficiency vs time for junction lifetimes",
    xLabel: "time (ns)",
    yLabel: "efficiency",
    series: [
      { file: "fig4a_t1_10ns.csv", header: T_NS, label: "T1 = 10 ns",
        style: solid("#1f77b4") },
      { file: "fig4a_t1_20ns.csv", header: T_NS, label: "T1 = 20 ns",
        style: dashed("#2ca02c") },
      { file: "fig4a_t1_50ns.csv", header: T_NS, label: "T1 = 50 ns",
        style: dashdot("#d62728") },
      { file: "fig4a_t1_500ns.csv", header: T_NS, label: "T1 = 500 ns",
        style: dotted("#000000") },
    ],
    yMin: 0,
  },
  "4b": {
    id: "4b",
    title: "detection efficiency vs time for bias points",
    xLabel: "time (ns)",
    yLabel: "efficiency",
    series: [
      { file: "fig4b_x2.csv", header: T_NS, label: "bias x = 2.0",
        style: dotted("#1f77b4") },
      { file: "fig4b_x1.9.csv", header: T_NS, label: "bias x = 1.9",
        style: dashdot("#2ca02c") },
      { file: "fig4b_x1.8.csv", header: T_NS, label: "bias x = 1.8",
        style: dashed("#d62728") },
      { file: "fig4b_x1.7.csv", header: T_NS, label: "bias x = 1.7",
        style: solid("#000000") },
    ],
    yMin: 0,
  },
  "5": {
    id: "5",
    title: "detection efficiency vs time for photon numbers",
    xLabel: "time (ns)",
    yLabel: "efficiency",
    series: [
      { file: "fig5_n1.csv", header: T_NS, label: "n = 1", style: solid("#1f77b4") },
      { file: "fig5_n2.csv", header: T_NS, label: "n = 2", style: dashed("#1f77b4") },
      { file: "fig5_n3.csv", header: T_NS, label: "n = 3", style: dashdot("#1f77b4") },
    ],
    yMin: 0,
  },
};

export interface LoadedFigure {
  spec: FigureSpec;
  input: PlotInput;
  /** the annotated optimum, when the figure defines one */
  optimum?: { x: number; y: number };
}

/** Check inputs exist, read them strictly, and build the plot input. */
export function loadFigure(id: string, inDir: string): LoadedFigure {
  const spec = FIGURES[id as FigureId];
  if (spec === undefined) {
    throw new CsvError(`unknown figure id ${id}; expected one of ${FIGURE_IDS.join(", ")}`);
  }
  const missing = spec.series
    .map((s) => join(inDir, s.file))
    .filter((p) => !existsSync(p));
  if (missing.length > 0) {
    throw new CsvError(`missing input files: ${missing.join(", ")}`);
  }
  const data: Series[] = spec.series.map((s) =>
    readSeries(join(inDir, s.file), s.header));

  const markers: Marker[] = [];
  let optimum: { x: number; y: number } | undefined;
  if (spec.annotateMaxOf !== undefined) {
    const s = data[spec.annotateMaxOf];
    const i = argmax(s.y);
    optimum = { x: s.x[i], y: s.y[i] };
    markers.push({
      x: optimum.x,
      y: optimum.y,
      label: `optimum: ${optimum.x.toFixed(1)} ns, eta = ${optimum.y.toFixed(3)}`,
      color: spec.series[spec.annotateMaxOf].style.color,
    });
  }

  const input: PlotInput = {
    title: spec.title,
    xLabel: spec.xLabel,
    yLabel: spec.yLabel,
    yMin: spec.yMin,
    yMax: spec.yMax,
    markers,
    series: spec.series.map((s, i) => ({
      label: s.label,
      x: data[i].x,
      y: data[i].y,
      style: s.style,
    })),
  };
  return { spec, input, optimum };
}
