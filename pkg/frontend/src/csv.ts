/** Strict reader for the simulator's two-column CSV output files. */

import { readFileSync } from "node:fs";

export interface Series {
  /** column names from the header row */
  header: [string, string];
  x: number[];
  y: number[];
}

export class CsvError extends Error {}

/**
 * Read a two-column numeric CSV with a header row.
 *
 * Rejects files whose header does not match the expectation, rows with a
 * wrong field count, and any cell that is missing or not a finite number,
 * naming the offending file and row.
 */
export function readSeries(path: string, expectedHeader: [string, string]): Series {
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch (err) {
    throw new CsvError(`cannot read ${path}: ${(err as Error).message}`);
  }
  const lines = text.split("\n");
  if (lines.length > 0 && lines[lines.length - 1] === "") lines.pop();
  if (lines.length === 0) {
    throw new CsvError(`${path}: empty file`);
  }
  const header = lines[0].split(",");
  if (header.length !== 2 || header[0] !== expectedHeader[0] || header[1] !== expectedHeader[1]) {
    throw new CsvError(
      `${path}: expected header ${expectedHeader.join(",")}, got ${lines[0]}`,
    );
  }
  if (lines.length === 1) {
    throw new CsvError(`${path}: no data rows`);
  }
  const x: number[] = [];
  const y: number[] = [];
  for (let i = 1; i < lines.length; i++) {
    const fields = lines[i].split(",");
    if (fields.length !== 2) {
      throw new CsvError(`${path}: row ${i + 1} has ${fields.length} fields, expected 2`);
    }
    const xi = Number(fields[0]);
    const yi = Number(fields[1]);
    if (fields[0] === "" || fields[1] === "" || !Number.isFinite(xi) || !Number.isFinite(yi)) {
      throw new CsvError(`${path}: row ${i + 1} is not finite numeric data: ${lines[i]}`);
    }
    x.push(xi);
    y.push(yi);
  }
  return { header: expectedHeader, x, y };
}
