import { FigureSpec } from "../spec.js";
import { readCsv, Row } from "../csv.js";
import {
  colorMap,
  extent,
  fmt,
  frame,
  linearScale,
  polylinePath,
  svgDocument,
  tag,
} from "../svg.js";

interface PathData {
  id: number;
  cls: string;
  taus: number[];
  re: number[];
  im: number[];
}

function groupPaths(rows: Row[]): PathData[] {
  const byId = new Map<number, PathData>();
  for (const row of rows) {
    const id = row.path_id as number;
    let p = byId.get(id);
    if (!p) {
      p = { id, cls: String(row.class), taus: [], re: [], im: [] };
      byId.set(id, p);
    }
    p.taus.push(row.tau as number);
    p.re.push(row.re as number);
    p.im.push(row.im as number);
  }
  return [...byId.values()].sort((a, b) => a.id - b.id);
}

function panel(
  paths: PathData[],
  markerTaus: number[],
  colors: Map<string, string>,
  name: string,
  x0: number,
  width: number,
  height: number,
  xlim: [number, number],
  ylim: [number, number],
): string {
  const margin = 10;
  const sx = linearScale(xlim, [x0 + margin, x0 + width - margin]);
  const sy = linearScale(ylim, [height - margin, margin]);
  const clipId = `clip-${name}`;
  const parts: string[] = [];
  parts.push(
    tag(
      "clipPath",
      { id: clipId },
      tag("rect", {
        x: fmt(x0 + margin),
        y: fmt(margin),
        width: fmt(width - 2 * margin),
        height: fmt(height - 2 * margin),
      }),
    ),
  );
  parts.push(frame(x0 + margin, margin, width - 2 * margin, height - 2 * margin));
  const clipped: string[] = [];
  for (const p of paths) {
    const pts = p.taus.map((_, i) => [sx(p.re[i]), sy(p.im[i])] as [number, number]);
    clipped.push(
      tag("path", {
        class: `eigpath cls-${p.cls}`,
        "data-path-id": p.id,
        d: polylinePath(pts),
        fill: "none",
        stroke: colors.get(p.cls) ?? "#000",
        "stroke-width": 1,
      }),
    );
    for (const t of markerTaus) {
      const i = p.taus.findIndex((v) => Math.abs(v - t) <= 1e-12);
      if (i < 0) continue;
      clipped.push(
        tag("circle", {
          class: "marker",
          "data-tau": t,
          "data-path-id": p.id,
          cx: fmt(sx(p.re[i])),
          cy: fmt(sy(p.im[i])),
          r: 2.5,
          fill: colors.get(p.cls) ?? "#000",
        }),
      );
    }
  }
  parts.push(tag("g", { "clip-path": `url(#${clipId})` }, clipped.join("")));
  return tag("g", { class: "panel", "data-panel": name }, parts.join(""));
}

/** Eigenvalue paths in the complex plane; optional zoom panel near Re = 0. */
export function renderPaths(spec: FigureSpec): string {
  const rows = readCsv(spec.input, ["tau", "path_id", "re", "im", "class"]);
  const paths = groupPaths(rows);
  const colors = colorMap(paths.map((p) => p.cls));
  const allRe = rows.map((r) => r.re as number);
  const allIm = rows.map((r) => r.im as number);
  const xlim = spec.xlim ?? extent(allRe);
  const ylim = spec.ylim ?? extent(allIm);

  const panels: string[] = [];
  const panelWidth = spec.width;
  panels.push(panel(paths, spec.markerTaus, colors, "full", 0, panelWidth, spec.height, xlim, ylim));
  let totalWidth = panelWidth;
  if (spec.zoom) {
    panels.push(
      panel(
        paths,
        spec.markerTaus,
        colors,
        "zoom",
        panelWidth,
        panelWidth,
        spec.height,
        spec.zoom.xlim,
        spec.zoom.ylim ?? ylim,
      ),
    );
    totalWidth = 2 * panelWidth;
  }
  return svgDocument(totalWidth, spec.height, panels.join("\n"));
}
