import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { dirname, resolve } from "node:path";

import { SchemaMismatch } from "./schema.js";
import { renderTrajectory } from "./figures/trajectory.js";
import { renderDecay } from "./figures/decay.js";
import { renderOverlay } from "./figures/overlay.js";
import { renderScaling } from "./figures/scaling.js";
import { renderExtrapolation } from "./figures/extrapolation.js";

export interface FigureSpec {
  kind: "trajectory" | "decay" | "overlay" | "scaling" | "extrapolation";
  inputs: Record<string, string>;
  output: string;
}

function need(spec: FigureSpec, keys: string[]): void {
  const missing = keys.filter((k) => !(k in spec.inputs));
  if (missing.length > 0) {
    throw new SchemaMismatch("figure spec", missing.map((k) => `inputs.${k}`));
  }
}

export function renderFigure(spec: FigureSpec, baseDir = "."): string {
  const inputs: Record<string, string> = {};
  for (const [k, v] of Object.entries(spec.inputs)) {
    inputs[k] = resolve(baseDir, v);
  }
  switch (spec.kind) {
    case "trajectory":
      need(spec, ["diagnostics"]);
      return renderTrajectory({ diagnostics: inputs["diagnostics"]! });
    case "decay":
      need(spec, ["diagnostics"]);
      return renderDecay({ diagnostics: inputs["diagnostics"]! });
    case "overlay":
      need(spec, ["diagnostics", "reduced"]);
      return renderOverlay({
        diagnostics: inputs["diagnostics"]!,
        reduced: inputs["reduced"]!,
      });
    case "scaling":
      need(spec, ["scaling"]);
      return renderScaling({ scaling: inputs["scaling"]! });
    case "extrapolation":
      need(spec, ["fgr"]);
      return renderExtrapolation({ fgr: inputs["fgr"]! });
    default:
      throw new SchemaMismatch("figure spec", [`kind=${String(spec.kind)}`]);
  }
}

/** Render every figure listed in a spec file; returns the written paths. */
export function renderSpecFile(path: string): string[] {
  const raw = JSON.parse(readFileSync(path, "utf-8")) as
    | FigureSpec
    | { figures: FigureSpec[] };
  const specs = Array.isArray((raw as { figures?: unknown }).figures)
    ? (raw as { figures: FigureSpec[] }).figures
    : [raw as FigureSpec];
  const base = dirname(resolve(path));
  const written: string[] = [];
  for (const spec of specs) {
    const svg = renderFigure(spec, base);
    const out = resolve(base, spec.output);
    mkdirSync(dirname(out), { recursive: true });
    writeFileSync(out, svg, "utf-8");
    written.push(out);
  }
  return written;
}
