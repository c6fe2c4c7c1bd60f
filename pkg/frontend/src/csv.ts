import Papa from "papaparse";
import * as fs from "node:fs";
import { SpecError } from "./spec.js";

export type Row = Record<string, number | string>;

/** Parse a CSV artifact and check that the expected columns are present. */
export function readCsv(file: string, required: string[]): Row[] {
  const text = fs.readFileSync(file, "utf8");
  const result = Papa.parse<Row>(text, {
    header: true,
    dynamicTyping: true,
    skipEmptyLines: true,
  });
  if (result.errors.length > 0) {
    throw new SpecError(`cannot parse ${file}: ${result.errors[0].message}`);
  }
  const fields = result.meta.fields ?? [];
  for (const col of required) {
    if (!fields.includes(col)) {
      throw new SpecError(`${file}: missing column '${col}' (found: ${fields.join(", ")})`);
    }
  }
  if (result.data.length === 0) {
    throw new SpecError(`${file}: no data rows`);
  }
  return result.data;
}
