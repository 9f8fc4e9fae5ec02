import { mkdtempSync, readFileSync, writeFileSync, copyFileSync, mkdirSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { FIGURES } from "../src/figures.js";
import { render } from "../src/render.js";
import { main, parseArgs } from "../src/cli.js";

const FIXTURES = join(__dirname, "fixtures");

function outDir(): string {
  return mkdtempSync(join(tmpdir(), "render-"));
}

function polylineCount(svg: string): number {
  return (svg.match(/<polyline /g) ?? []).length;
}

describe("render (svg)", () => {
  it("draws figure 2 with three curves and the annotated optimum", () => {
    const dir = outDir();
    const { path, figure } = render("2", FIXTURES, dir, "svg");
    const svg = readFileSync(path, "utf-8");
    expect(polylineCount(svg)).toBe(3);
    expect(svg).toContain("<circle");
    expect(svg).toContain("optimum:");
    // the marker reflects the data's own maximum
    const eta = figure.input.series[2];
    const best = eta.y.reduce((m, v) => Math.max(m, v), -Infinity);
    expect(figure.optimum!.y).toBe(best);
    expect(svg).toContain(`eta = ${figure.optimum!.y.toFixed(3)}`);
  });

  it("is a pure function of its inputs (byte-identical reruns)", () => {
    const d1 = outDir();
    const d2 = outDir();
    const a = render("2", FIXTURES, d1, "svg");
    const b = render("2", FIXTURES, d2, "svg");
    expect(readFileSync(a.path)).toEqual(readFileSync(b.path));
  });

  it("figure 3 is symmetric about zero detuning", () => {
    const dir = outDir();
    const { figure } = render("3", FIXTURES, dir, "svg");
    for (const s of figure.input.series) {
      const eta = new Map(s.x.map((x, i) => [x.toFixed(6), s.y[i]]));
      let checked = 0;
      for (const [key, value] of eta) {
        const mirror = eta.get((-Number(key)).toFixed(6));
        if (mirror !== undefined) {
          expect(Math.abs(value - mirror)).toBeLessThan(0.02);
          checked++;
        }
      }
      expect(checked).toBeGreaterThan(50);
    }
  });

  it("rejects a missing input directory", () => {
    expect(() => render("2", "/nonexistent", outDir(), "svg"))
      .toThrow(/missing input files/);
  });

  it("reports nan rows with the offending file", () => {
    const broken = outDir();
    for (const s of FIGURES["2"].series) {
      copyFileSync(join(FIXTURES, s.file), join(broken, s.file));
    }
    const target = join(broken, "fig2_eta.csv");
    const lines = readFileSync(target, "utf-8").split("\n");
    lines[5] = "2.0,nan";
    writeFileSync(target, lines.join("\n"));
    expect(() => render("2", broken, outDir(), "svg")).toThrow(/fig2_eta.*row 6/s);
  });

  it("rejects an empty series with a nonzero-exit error", () => {
    const broken = outDir();
    for (const s of FIGURES["2"].series) {
      copyFileSync(join(FIXTURES, s.file), join(broken, s.file));
    }
    writeFileSync(join(broken, "fig2_p0.csv"), "t_ns,P_0\n");
    expect(() => render("2", broken, outDir(), "svg")).toThrow(/no data rows/);
    const rc = main(["render", "--figure", "2", "--in", broken,
                     "--out", outDir(), "--format", "svg"]);
    expect(rc).toBe(1);
  });
});

describe("render (png)", () => {
  it("writes a decodable PNG of the canvas size", () => {
    const dir = outDir();
    const { path } = render("2", FIXTURES, dir, "png");
    const png = readFileSync(path);
    expect(png.readUInt32BE(16)).toBe(840);
    expect(png.readUInt32BE(20)).toBe(560);
  });

  it("is pixel-identical across reruns", () => {
    const a = render("5", FIXTURES, outDir(), "png");
    const b = render("5", FIXTURES, outDir(), "png");
    expect(readFileSync(a.path)).toEqual(readFileSync(b.path));
  });
});

describe("cli", () => {
  it("parses the documented interface", () => {
    const args = parseArgs(["render", "--figure", "4a", "--in", "x",
                            "--out", "y", "--format", "png"]);
    expect(args).toEqual({ figure: "4a", inDir: "x", outDir: "y", format: "png" });
  });

  it("defaults to svg in the current directory", () => {
    const args = parseArgs(["--figure", "2", "--in", "x"]);
    expect(args.format).toBe("svg");
    expect(args.outDir).toBe(".");
  });

  it("rejects unknown figures and formats", () => {
    expect(main(["render", "--figure", "9", "--in", "x"])).toBe(2);
    expect(main(["render", "--figure", "2", "--in", "x", "--format", "bmp"])).toBe(2);
    expect(main(["render"])).toBe(2);
  });
});

describe("full figure set", () => {
  const expectedSeries: Record<string, number> = {
    "2": 3, "3": 3, "4a": 4, "4b": 4, "5": 3,
  };

  it("renders all five figures with the expected series counts", () => {
    const dir = outDir();
    for (const [id, count] of Object.entries(expectedSeries)) {
      const { path } = render(id, FIXTURES, dir, "svg");
      const svg = readFileSync(path, "utf-8");
      expect(polylineCount(svg), `figure ${id}`).toBe(count);
    }
  });

  it("annotates the figure 2 optimum at the data's own maximum", () => {
    const { figure } = render("2", FIXTURES, outDir(), "svg");
    const eta = figure.input.series[2];
    let bestI = 0;
    for (let i = 1; i < eta.y.length; i++) {
      if (eta.y[i] > eta.y[bestI]) bestI = i;
    }
    expect(figure.optimum).toEqual({ x: eta.x[bestI], y: eta.y[bestI] });
  });
});
