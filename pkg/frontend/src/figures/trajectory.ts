import { readCsv } from "../csv.js";
import { column, modeCount, modeModulus, requireColumns } from "../schema.js";
import { PALETTE, PanelSpec, renderPanels } from "../svg.js";

/** Mode moduli |z_j|(t) from a diagnostics series. */
export function renderTrajectory(inputs: { diagnostics: string }): string {
  const table = readCsv(inputs.diagnostics);
  requireColumns(table, ["t"]);
  const t = column(table, "t");
  const n = modeCount(table);
  const panel: PanelSpec = {
    title: "Mode amplitudes along the run",
    xLabel: "t",
    yLabel: "|z_j|",
    xScale: "linear",
    yScale: "linear",
    series: Array.from({ length: n }, (_, j) => ({
      label: `|z_${j + 1}|`,
      x: t,
      y: modeModulus(table, j + 1),
      color: PALETTE[j % PALETTE.length] ?? "#000",
    })),
  };
  return renderPanels([panel]);
}
