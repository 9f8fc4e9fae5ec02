/** Deterministic SVG writer for a plot model: fixed fonts and sizes, no
 * timestamps or generated ids, numbers rounded to a fixed precision. */

import { PlotModel } from "./plot.js";

const FONT = "font-family=\"Helvetica, Arial, sans-serif\"";

function n(v: number): string {
  // fixed 2-decimal formatting keeps output byte-stable
  return v.toFixed(2);
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function dashAttr(dash: number[]): string {
  return dash.length ? ` stroke-dasharray="${dash.join(" ")}"` : "";
}

export function renderSvg(model: PlotModel): string {
  const { plot } = model;
  const out: string[] = [];
  out.push(`<?xml version="1.0" encoding="UTF-8"?>`);
  out.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${model.width}" ` +
    `height="${model.height}" viewBox="0 0 ${model.width} ${model.height}">`,
  );
  out.push(`<rect width="${model.width}" height="${model.height}" fill="#ffffff"/>`);

  // frame
  out.push(
    `<rect x="${n(plot.x0)}" y="${n(plot.y0)}" width="${n(plot.x1 - plot.x0)}" ` +
    `height="${n(plot.y1 - plot.y0)}" fill="none" stroke="#000000" stroke-width="1"/>`,
  );

  // ticks and grid
  for (const t of model.xTicks) {
    out.push(
      `<line x1="${n(t.pos)}" y1="${n(plot.y1)}" x2="${n(t.pos)}" ` +
      `y2="${n(plot.y1 + 6)}" stroke="#000000" stroke-width="1"/>`,
    );
    out.push(
      `<line x1="${n(t.pos)}" y1="${n(plot.y0)}" x2="${n(t.pos)}" ` +
      `y2="${n(plot.y1)}" stroke="#dddddd" stroke-width="0.5"/>`,
    );
    out.push(
      `<text x="${n(t.pos)}" y="${n(plot.y1 + 20)}" ${FONT} font-size="13" ` +
      `text-anchor="middle">${esc(t.label)}</text>`,
    );
  }
  for (const t of model.yTicks) {
    out.push(
      `<line x1="${n(plot.x0 - 6)}" y1="${n(t.pos)}" x2="${n(plot.x0)}" ` +
      `y2="${n(t.pos)}" stroke="#000000" stroke-width="1"/>`,
    );
    out.push(
      `<line x1="${n(plot.x0)}" y1="${n(t.pos)}" x2="${n(plot.x1)}" ` +
      `y2="${n(t.pos)}" stroke="#dddddd" stroke-width="0.5"/>`,
    );
    out.push(
      `<text x="${n(plot.x0 - 10)}" y="${n(t.pos + 4)}" ${FONT} font-size="13" ` +
      `text-anchor="end">${esc(t.label)}</text>`,
    );
  }

  // axis labels and title
  out.push(
    `<text x="${n((plot.x0 + plot.x1) / 2)}" y="${n(model.height - 14)}" ${FONT} ` +
    `font-size="15" text-anchor="middle">${esc(model.xLabel)}</text>`,
  );
  out.push(
    `<text x="18" y="${n((plot.y0 + plot.y1) / 2)}" ${FONT} font-size="15" ` +
    `text-anchor="middle" transform="rotate(-90 18 ${n((plot.y0 + plot.y1) / 2)})">` +
    `${esc(model.yLabel)}</text>`,
  );
  out.push(
    `<text x="${n((plot.x0 + plot.x1) / 2)}" y="24" ${FONT} font-size="16" ` +
    `text-anchor="middle">${esc(model.title)}</text>`,
  );

  // series
  for (const s of model.series) {
    const pts = s.points.map(([x, y]) => `${n(x)},${n(y)}`).join(" ");
    out.push(
      `<polyline points="${pts}" fill="none" stroke="${s.style.color}" ` +
      `stroke-width="${s.style.width}"${dashAttr(s.style.dash)}/>`,
    );
  }

  // legend
  const legendX = plot.x0 + 14;
  let legendY = plot.y0 + 18;
  for (const s of model.series) {
    out.push(
      `<line x1="${n(legendX)}" y1="${n(legendY - 4)}" x2="${n(legendX + 34)}" ` +
      `y2="${n(legendY - 4)}" stroke="${s.style.color}" ` +
      `stroke-width="${s.style.width}"${dashAttr(s.style.dash)}/>`,
    );
    out.push(
      `<text x="${n(legendX + 42)}" y="${n(legendY)}" ${FONT} font-size="13">` +
      `${esc(s.label)}</text>`,
    );
    legendY += 18;
  }

  // markers (annotated optima)
  for (const m of model.markers) {
    out.push(
      `<circle cx="${n(m.px)}" cy="${n(m.py)}" r="5" fill="${m.color}" ` +
      `stroke="#000000" stroke-width="1"/>`,
    );
    out.push(
      `<text x="${n(m.px + 10)}" y="${n(m.py - 8)}" ${FONT} font-size="13">` +
      `${esc(m.label)}</text>`,
    );
  }

  out.push("</svg>");
  return out.join("\n") + "\n";
}
