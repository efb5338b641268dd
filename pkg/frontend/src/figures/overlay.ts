import { readCsv } from "../csv.js";
import { column, modeCount, modeModulus, requireColumns } from "../schema.js";
import { PALETTE, PanelSpec, renderPanels, Series } from "../svg.js";

/** Full-model moduli overlaid with the reduced-model trajectories (dashed). */
export function renderOverlay(inputs: {
  diagnostics: string;
  reduced: string;
}): string {
  const full = readCsv(inputs.diagnostics);
  const red = readCsv(inputs.reduced);
  requireColumns(full, ["t"]);
  requireColumns(red, ["t"]);
  const tf = column(full, "t");
  const tr = column(red, "t");
  const n = Math.min(modeCount(full), modeCount(red));
  const series: Series[] = [];
  for (let j = 1; j <= n; j++) {
    const color = PALETTE[(j - 1) % PALETTE.length] ?? "#000";
    series.push({
      label: `full |z_${j}|`,
      x: tf,
      y: modeModulus(full, j),
      color,
    });
    series.push({
      label: `reduced |z_${j}|`,
      x: tr,
      y: modeModulus(red, j),
      color,
      dash: "6 4",
    });
  }
  const panel: PanelSpec = {
    title: "Full model vs damped reduced model",
    xLabel: "t",
    yLabel: "|z_j|",
    xScale: "linear",
    yScale: "linear",
    series,
  };
  return renderPanels([panel]);
}
