import { describe, expect, it } from "vitest";
import * as fs from "node:fs";
import * as path from "node:path";
import { fileURLToPath } from "node:url";
import { FigureSpecSchema } from "../src/spec.js";
import { renderSpec } from "../src/render.js";

const here = path.dirname(fileURLToPath(import.meta.url));
const input = path.join(here, "..", "fixtures", "expand_mode.json");

describe("coefficient stem plot", () => {
  const nCoeffs = JSON.parse(fs.readFileSync(input, "utf8")).coefficients.length;
  const svg = renderSpec(
    FigureSpecSchema.parse({ kind: "stem", input, output: "unused.svg" }),
  );

  it("draws one stem per coefficient", () => {
    expect(svg.match(/class="stem"/g)).toHaveLength(nCoeffs);
    expect(svg.match(/class="stem-head"/g)).toHaveLength(nCoeffs);
  });

  it("overlays one damping marker per coefficient", () => {
    expect(svg.match(/class="damping-marker"/g)).toHaveLength(nCoeffs);
  });
});
