import { z } from "zod";
import * as fs from "node:fs";
import * as path from "node:path";

const limits = z.tuple([z.number(), z.number()]);

export const FigureSpecSchema = z.object({
  /** Figure kind: eigenvalue-path panels, spectrum scatter, coefficient stems, energy trace. */
  kind: z.enum(["paths", "spectrum", "stem", "energy"]),
  /** Input artifact (CSV for paths/spectrum/energy, JSON for stem), relative to the spec file. */
  input: z.string(),
  /** Output SVG path, relative to the spec file. */
  output: z.string(),
  width: z.number().positive().default(480),
  height: z.number().positive().default(420),
  xlim: limits.optional(),
  ylim: limits.optional(),
  /** paths only: overlay a marker on every path at each of these tau values. */
  markerTaus: z.array(z.number()).default([0, 1, 4]),
  /** paths only: add a second panel restricted to this window near the imaginary axis. */
  zoom: z.object({ xlim: limits, ylim: limits.optional() }).optional(),
});

export type FigureSpec = z.infer<typeof FigureSpecSchema>;

export class SpecError extends Error {}

/** Load and validate a figure spec, resolving its file references. */
export function loadSpec(specPath: string): FigureSpec {
  let raw: unknown;
  try {
    raw = JSON.parse(fs.readFileSync(specPath, "utf8"));
  } catch (err) {
    throw new SpecError(`cannot read spec ${specPath}: ${(err as Error).message}`);
  }
  const parsed = FigureSpecSchema.safeParse(raw);
  if (!parsed.success) {
    throw new SpecError(`invalid spec ${specPath}: ${parsed.error.message}`);
  }
  const spec = parsed.data;
  const base = path.dirname(path.resolve(specPath));
  spec.input = path.resolve(base, spec.input);
  spec.output = path.resolve(base, spec.output);
  if (!fs.existsSync(spec.input)) {
    throw new SpecError(`input artifact not found: ${spec.input}`);
  }
  return spec;
}
