import assert from "node:assert/strict";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { fileURLToPath } from "node:url";
import { join } from "node:path";
import { test } from "node:test";

import { renderTrajectory } from "../src/figures/trajectory.js";
import { renderDecay } from "../src/figures/decay.js";
import { renderOverlay } from "../src/figures/overlay.js";
import { renderScalingDetailed } from "../src/figures/scaling.js";
import { renderExtrapolation } from "../src/figures/extrapolation.js";
import { renderFigure, renderSpecFile } from "../src/render.js";
import { SchemaMismatch } from "../src/schema.js";

const FIXTURES = fileURLToPath(new URL("../../fixtures/headline/", import.meta.url));
const diagnostics = join(FIXTURES, "diagnostics.csv");
const reduced = join(FIXTURES, "reduced.csv");
const scaling = join(FIXTURES, "profile_scaling.csv");
const fgr = join(FIXTURES, "fgr.json");

function checkSvg(svg: string): void {
  assert.ok(svg.startsWith("<svg"));
  assert.ok(svg.endsWith("</svg>"));
  assert.ok(svg.includes("<polyline") || svg.includes("<circle"));
  assert.ok(!/\d{4}-\d{2}-\d{2}/.test(svg), "no timestamps");
}

test("trajectory figure renders from the headline diagnostics", () => {
  const svg = renderTrajectory({ diagnostics });
  checkSvg(svg);
  assert.ok(svg.includes("|z_1|") && svg.includes("|z_2|"));
});

test("decay figure has both panels", () => {
  const svg = renderDecay({ diagnostics });
  checkSvg(svg);
  assert.ok(svg.includes("Resonant monomial decay"));
  assert.ok(svg.includes("Running time-L2 accumulation"));
});

test("overlay figure shows full and reduced series", () => {
  const svg = renderOverlay({ diagnostics, reduced });
  checkSvg(svg);
  assert.ok(svg.includes("full |z_2|") && svg.includes("reduced |z_2|"));
  assert.ok(svg.includes("stroke-dasharray"));
});

test("scaling figure annotates slopes near the measured values", () => {
  const { svg, slopes } = renderScalingDetailed({ scaling });
  checkSvg(svg);
  assert.ok(svg.includes("slope ="));
  const payload = JSON.parse(
    readFileSync(join(FIXTURES, "profile.json"), "utf-8"),
  ) as { residual_scaling: { axes: { axis: number; slope: number }[] } };
  for (const axis of payload.residual_scaling.axes) {
    const mine = slopes.get(axis.axis);
    assert.ok(mine !== undefined, `axis ${axis.axis} fitted`);
    assert.ok(
      Math.abs(mine - axis.slope) <= 0.3,
      `slope ${mine} within 0.3 of primary ${axis.slope}`,
    );
  }
});

test("extrapolation figure shows the viscosity table", () => {
  const svg = renderExtrapolation({ fgr });
  checkSvg(svg);
  assert.ok(svg.includes("m=(-1,2)"));
});

test("rendering is deterministic", () => {
  const a = renderDecay({ diagnostics });
  const b = renderDecay({ diagnostics });
  assert.equal(a, b);
});

test("single-point series renders without crashing", () => {
  const dir = mkdtempSync(join(tmpdir(), "plots-"));
  const single = join(dir, "single.csv");
  writeFileSync(
    single,
    "t,re_z_1,im_z_1,abs_zm-1_2,runl2_zm-1_2\n0.0,0.03,0.0,2.7e-05,0.0\n",
  );
  const svg = renderDecay({ diagnostics: single });
  assert.ok(svg.includes("<circle"));
});

test("spec file drives all five kinds", () => {
  const dir = mkdtempSync(join(tmpdir(), "plots-"));
  const spec = {
    figures: [
      { kind: "trajectory", inputs: { diagnostics }, output: "fig1.svg" },
      { kind: "decay", inputs: { diagnostics }, output: "fig2.svg" },
      { kind: "overlay", inputs: { diagnostics, reduced }, output: "fig3.svg" },
      { kind: "scaling", inputs: { scaling }, output: "fig4.svg" },
      { kind: "extrapolation", inputs: { fgr }, output: "fig5.svg" },
    ],
  };
  const specPath = join(dir, "spec.json");
  writeFileSync(specPath, JSON.stringify(spec));
  const written = renderSpecFile(specPath);
  assert.equal(written.length, 5);
  for (const p of written) {
    checkSvg(readFileSync(p, "utf-8"));
  }
});

test("missing inputs in a figure spec are schema mismatches", () => {
  assert.throws(
    () =>
      renderFigure({
        kind: "overlay",
        inputs: { diagnostics },
        output: "x.svg",
      }),
    SchemaMismatch,
  );
});

test("wrong csv for a figure reports offending columns", () => {
  const dir = mkdtempSync(join(tmpdir(), "plots-"));
  const bad = join(dir, "bad.csv");
  writeFileSync(bad, "alpha,beta\n1,2\n");
  try {
    renderTrajectory({ diagnostics: bad });
    assert.fail("expected SchemaMismatch");
  } catch (err) {
    assert.ok(err instanceof SchemaMismatch);
    assert.ok(err.missing.length > 0);
  }
});
