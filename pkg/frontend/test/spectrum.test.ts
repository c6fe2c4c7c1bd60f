import { describe, expect, it } from "vitest";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { fileURLToPath } from "node:url";
import { FigureSpecSchema, SpecError } from "../src/spec.js";
import { renderSpec } from "../src/render.js";

const here = path.dirname(fileURLToPath(import.meta.url));
const fixtures = path.join(here, "..", "fixtures");

function specFor(input: string) {
  return FigureSpecSchema.parse({ kind: "spectrum", input, output: "unused.svg" });
}

function tmpCsv(content: string): string {
  const file = path.join(fs.mkdtempSync(path.join(os.tmpdir(), "plots-")), "spectrum.csv");
  fs.writeFileSync(file, content);
  return file;
}

describe("spectrum scatter", () => {
  it("renders a single eigenvalue as a single marker", () => {
    const file = tmpCsv("tau,index,re,im\n1.0,0,-0.5,2.0\n");
    const svg = renderSpec(specFor(file));
    expect(svg.match(/<circle /g)).toHaveLength(1);
  });

  it("renders one marker per row of a real artifact", () => {
    const file = path.join(fixtures, "spectrum.csv");
    const rows = fs.readFileSync(file, "utf8").trim().split("\n").length - 1;
    const svg = renderSpec(specFor(file));
    expect(svg.match(/<circle /g)).toHaveLength(rows);
    expect(svg).toContain('class="marker conforming"');
  });

  it("rejects artifacts with missing columns", () => {
    const file = tmpCsv("tau,real_part\n1.0,0.5\n");
    expect(() => renderSpec(specFor(file))).toThrow(SpecError);
    expect(() => renderSpec(specFor(file))).toThrow(/missing column 're'/);
  });

  it("rejects empty sweeps", () => {
    const file = tmpCsv("tau,index,re,im\n");
    expect(() => renderSpec(specFor(file))).toThrow(/no data rows/);
  });
});
