import * as fs from "node:fs";
import { FigureSpec, SpecError } from "../spec.js";
import { extent, fmt, frame, linearScale, svgDocument, tag } from "../svg.js";

interface Coefficient {
  index: number;
  abs: number;
  damping: number;
}

/** Stem plot of expansion-coefficient magnitudes with the damping rate
 * (-Re of the reference eigenvalue) overlaid per stem. */
export function renderStem(spec: FigureSpec): string {
  const data = JSON.parse(fs.readFileSync(spec.input, "utf8"));
  const coeffs: Coefficient[] = data.coefficients;
  if (!Array.isArray(coeffs) || coeffs.length === 0) {
    throw new SpecError(`${spec.input}: no 'coefficients' array`);
  }
  for (const key of ["index", "abs", "damping"]) {
    if (!(key in coeffs[0])) {
      throw new SpecError(`${spec.input}: coefficient entries lack '${key}'`);
    }
  }
  const margin = 20;
  const sx = linearScale(extent(coeffs.map((c) => c.index), 0.08), [margin, spec.width - margin]);
  const sy = linearScale([0, Math.max(...coeffs.map((c) => c.abs)) * 1.1], [
    spec.height - margin,
    margin,
  ]);
  const dampingVals = coeffs.map((c) => -c.damping);
  const sd = linearScale([0, Math.max(...dampingVals, 1) * 1.1], [spec.height - margin, margin]);

  const body: string[] = [frame(margin, margin, spec.width - 2 * margin, spec.height - 2 * margin)];
  for (const c of coeffs) {
    const x = fmt(sx(c.index));
    body.push(
      tag("line", {
        class: "stem",
        "data-index": c.index,
        x1: x,
        y1: fmt(sy(0)),
        x2: x,
        y2: fmt(sy(c.abs)),
        stroke: "#1f77b4",
      }),
      tag("circle", {
        class: "stem-head",
        cx: x,
        cy: fmt(sy(c.abs)),
        r: 3,
        fill: "#1f77b4",
      }),
      tag("rect", {
        class: "damping-marker",
        "data-index": c.index,
        x: fmt(sx(c.index) - 2.5),
        y: fmt(sd(-c.damping) - 2.5),
        width: 5,
        height: 5,
        fill: "#d62728",
      }),
    );
  }
  return svgDocument(spec.width, spec.height, body.join("\n"));
}
