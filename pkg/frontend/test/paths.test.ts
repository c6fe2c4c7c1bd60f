import { describe, expect, it } from "vitest";
import * as fs from "node:fs";
import * as path from "node:path";
import { fileURLToPath } from "node:url";
import { loadSpec } from "../src/spec.js";
import { renderSpec } from "../src/render.js";

const here = path.dirname(fileURLToPath(import.meta.url));
const specPath = path.join(here, "..", "examples", "fig1.json");
const sweepCsv = path.join(here, "..", "fixtures", "fig1", "sweep.csv");

function distinctPathIds(): number {
  const lines = fs.readFileSync(sweepCsv, "utf8").trim().split("\n").slice(1);
  return new Set(lines.map((l) => l.split(",")[1])).size;
}

describe("two-panel eigenvalue path figure", () => {
  const svg = renderSpec(loadSpec(specPath));
  const nPaths = distinctPathIds();

  it("has a full panel and a zoom panel", () => {
    expect(svg.match(/data-panel="full"/g)).toHaveLength(1);
    expect(svg.match(/data-panel="zoom"/g)).toHaveLength(1);
  });

  it("draws one path per tracked eigenvalue in each panel", () => {
    expect(nPaths).toBeGreaterThan(0);
    expect(svg.match(/class="eigpath /g)).toHaveLength(2 * nPaths);
  });

  it("overlays markers at tau = 0, 1, 4 on every path in each panel", () => {
    expect(svg.match(/class="marker"/g)).toHaveLength(2 * nPaths * 3);
    for (const tau of [0, 1, 4]) {
      expect(svg.match(new RegExp(`data-tau="${tau}"`, "g"))).toHaveLength(2 * nPaths);
    }
  });

  it("is deterministic and leaves the input artifact untouched", () => {
    const before = fs.readFileSync(sweepCsv, "utf8");
    expect(renderSpec(loadSpec(specPath))).toBe(svg);
    expect(fs.readFileSync(sweepCsv, "utf8")).toBe(before);
  });
});
