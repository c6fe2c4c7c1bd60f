import { FigureSpec } from "../spec.js";
import { readCsv } from "../csv.js";
import { extent, fmt, frame, linearScale, svgDocument, tag } from "../svg.js";

/** Scatter of eigenvalues in the complex plane, colored by the dominant
 * conforming/non-conforming eigenvector component when available. */
export function renderSpectrum(spec: FigureSpec): string {
  const rows = readCsv(spec.input, ["re", "im"]);
  const hasSplit = "wnc_norm" in rows[0];
  const margin = 10;
  const sx = linearScale(spec.xlim ?? extent(rows.map((r) => r.re as number)), [
    margin,
    spec.width - margin,
  ]);
  const sy = linearScale(spec.ylim ?? extent(rows.map((r) => r.im as number)), [
    spec.height - margin,
    margin,
  ]);
  const body: string[] = [frame(margin, margin, spec.width - 2 * margin, spec.height - 2 * margin)];
  for (const row of rows) {
    const nonconforming = hasSplit && (row.wnc_norm as number) > 0.5;
    body.push(
      tag("circle", {
        class: `marker ${nonconforming ? "nonconforming" : "conforming"}`,
        cx: fmt(sx(row.re as number)),
        cy: fmt(sy(row.im as number)),
        r: 3,
        fill: nonconforming ? "#d62728" : "#1f77b4",
      }),
    );
  }
  return svgDocument(spec.width, spec.height, body.join("\n"));
}
