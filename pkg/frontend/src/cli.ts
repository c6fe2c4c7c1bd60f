#!/usr/bin/env node
import { renderFile } from "./render.js";
import { SpecError } from "./spec.js";

const USAGE = "usage: dgspectra-plots render --spec <fig.json>";

function main(argv: string[]): number {
  if (argv[0] !== "render") {
    console.error(USAGE);
    return 2;
  }
  const flag = argv.indexOf("--spec");
  if (flag < 0 || flag + 1 >= argv.length) {
    console.error(USAGE);
    return 2;
  }
  try {
    const out = renderFile(argv[flag + 1]);
    console.log(out);
    return 0;
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return err instanceof SpecError ? 2 : 3;
  }
}

process.exit(main(process.argv.slice(2)));
