import * as fs from "node:fs";
import * as path from "node:path";
import { FigureSpec, loadSpec } from "./spec.js";
import { renderPaths } from "./figures/paths.js";
import { renderSpectrum } from "./figures/spectrum.js";
import { renderStem } from "./figures/stem.js";
import { renderEnergy } from "./figures/energy.js";

const RENDERERS: Record<FigureSpec["kind"], (spec: FigureSpec) => string> = {
  paths: renderPaths,
  spectrum: renderSpectrum,
  stem: renderStem,
  energy: renderEnergy,
};

/** Render a figure spec to an SVG string (pure: inputs are only read). */
export function renderSpec(spec: FigureSpec): string {
  return RENDERERS[spec.kind](spec);
}

/** Load a spec file, render it, and write the SVG next to the spec. */
export function renderFile(specPath: string): string {
  const spec = loadSpec(specPath);
  const svg = renderSpec(spec);
  fs.mkdirSync(path.dirname(spec.output), { recursive: true });
  fs.writeFileSync(spec.output, svg);
  return spec.output;
}
