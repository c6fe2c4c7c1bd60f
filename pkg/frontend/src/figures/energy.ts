import { FigureSpec } from "../spec.js";
import { readCsv } from "../csv.js";
import { extent, frame, linearScale, polylinePath, svgDocument, tag } from "../svg.js";

/** Discrete energy versus time as a single trace. */
export function renderEnergy(spec: FigureSpec): string {
  const rows = readCsv(spec.input, ["t", "energy"]);
  const margin = 10;
  const sx = linearScale(spec.xlim ?? extent(rows.map((r) => r.t as number), 0), [
    margin,
    spec.width - margin,
  ]);
  const sy = linearScale(spec.ylim ?? extent(rows.map((r) => r.energy as number)), [
    spec.height - margin,
    margin,
  ]);
  const pts = rows.map(
    (r) => [sx(r.t as number), sy(r.energy as number)] as [number, number],
  );
  const body = [
    frame(margin, margin, spec.width - 2 * margin, spec.height - 2 * margin),
    tag("path", {
      class: "trace",
      d: polylinePath(pts),
      fill: "none",
      stroke: "#1f77b4",
      "stroke-width": 1.5,
    }),
  ];
  return svgDocument(spec.width, spec.height, body.join("\n"));
}
