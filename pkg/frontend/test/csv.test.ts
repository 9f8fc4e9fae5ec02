import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { readSeries, CsvError } from "../src/csv.js";

function tmpCsv(content: string): string {
  const dir = mkdtempSync(join(tmpdir(), "csv-"));
  const path = join(dir, "data.csv");
  writeFileSync(path, content);
  return path;
}

describe("readSeries", () => {
  it("parses a valid two-column file", () => {
    const path = tmpCsv("t_ns,eta\n0,0\n0.5,0.25\n1,0.5\n");
    const s = readSeries(path, ["t_ns", "eta"]);
    expect(s.x).toEqual([0, 0.5, 1]);
    expect(s.y).toEqual([0, 0.25, 0.5]);
  });

  it("rejects a wrong header", () => {
    const path = tmpCsv("time,value\n0,0\n");
    expect(() => readSeries(path, ["t_ns", "eta"])).toThrow(CsvError);
    expect(() => readSeries(path, ["t_ns", "eta"])).toThrow(/expected header/);
  });

  it("rejects nan cells naming the row", () => {
    const path = tmpCsv("t_ns,eta\n0,0\n0.5,nan\n");
    expect(() => readSeries(path, ["t_ns", "eta"])).toThrow(/row 3/);
  });

  it("rejects missing cells", () => {
    const path = tmpCsv("t_ns,eta\n0,\n");
    expect(() => readSeries(path, ["t_ns", "eta"])).toThrow(/row 2/);
  });

  it("rejects empty series", () => {
    const path = tmpCsv("t_ns,eta\n");
    expect(() => readSeries(path, ["t_ns", "eta"])).toThrow(/no data rows/);
  });

  it("rejects a missing file", () => {
    expect(() => readSeries("/nonexistent/x.csv", ["t_ns", "eta"]))
      .toThrow(/cannot read/);
  });

  it("rejects rows with extra fields", () => {
    const path = tmpCsv("t_ns,eta\n0,0,0\n");
    expect(() => readSeries(path, ["t_ns", "eta"])).toThrow(/3 fields/);
  });
});
