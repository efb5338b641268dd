#!/usr/bin/env node
import { renderSpecFile } from "./render.js";

function usage(): never {
  console.error("usage: nlslab-plots render --spec FILE");
  process.exit(1);
}

const args = process.argv.slice(2);
if (args[0] !== "render") usage();
const flag = args.indexOf("--spec");
const specPath = flag >= 0 ? args[flag + 1] : undefined;
if (!specPath) usage();

try {
  const written = renderSpecFile(specPath);
  for (const p of written) console.log(p);
} catch (err) {
  console.error(String(err instanceof Error ? err.message : err));
  process.exit(2);
}
