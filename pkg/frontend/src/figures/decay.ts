import { readCsv } from "../csv.js";
import { column, columnsWithPrefix, requireColumns, SchemaMismatch } from "../schema.js";
import { PALETTE, PanelSpec, renderPanels } from "../svg.js";

/** Resonant-monomial decay with its running accumulation inset panel. */
export function renderDecay(inputs: { diagnostics: string }): string {
  const table = readCsv(inputs.diagnostics);
  requireColumns(table, ["t"]);
  const t = column(table, "t");
  const monoCols = columnsWithPrefix(table, "abs_zm");
  if (monoCols.length === 0) throw new SchemaMismatch(table.source, ["abs_zm*"]);
  const runCols = columnsWithPrefix(table, "runl2_zm");
  const decayPanel: PanelSpec = {
    title: "Resonant monomial decay",
    xLabel: "t",
    yLabel: "|z^m|",
    xScale: "linear",
    yScale: "log",
    series: monoCols.map((c, i) => ({
      label: c.replace("abs_z", "|z^") + "|",
      x: t,
      y: column(table, c),
      color: PALETTE[i % PALETTE.length] ?? "#000",
    })),
  };
  const insetPanel: PanelSpec = {
    title: "Running time-L2 accumulation",
    xLabel: "t",
    yLabel: "running L2",
    xScale: "linear",
    yScale: "linear",
    series: runCols.map((c, i) => ({
      label: c.replace("runl2_z", ""),
      x: t,
      y: column(table, c),
      color: PALETTE[i % PALETTE.length] ?? "#000",
    })),
  };
  return renderPanels([decayPanel, insetPanel]);
}
