import { readJson } from "../csv.js";
import { SchemaMismatch } from "../schema.js";
import { PALETTE, PanelSpec, renderPanels, Series } from "../svg.js";

interface FgrEntry {
  m: number[];
  gamma: number;
  table: [number, number][];
  extrapolants: number[];
}

function asEntries(payload: unknown, source: string): FgrEntry[] {
  if (
    typeof payload !== "object" ||
    payload === null ||
    !Array.isArray((payload as { entries?: unknown }).entries)
  ) {
    throw new SchemaMismatch(source, ["entries"]);
  }
  const entries = (payload as { entries: unknown[] }).entries;
  return entries.map((e, i) => {
    const row = e as Partial<FgrEntry>;
    if (!row.m || !row.table || row.gamma === undefined) {
      throw new SchemaMismatch(source, [`entries[${i}].m/table/gamma`]);
    }
    return {
      m: row.m,
      gamma: row.gamma,
      table: row.table,
      extrapolants: row.extrapolants ?? [],
    };
  });
}

/** Damping-coefficient viscosity table with its extrapolated limits. */
export function renderExtrapolation(inputs: { fgr: string }): string {
  const payload = readJson(inputs.fgr);
  const entries = asEntries(payload, inputs.fgr);
  const series: Series[] = [];
  entries.forEach((e, i) => {
    const color = PALETTE[i % PALETTE.length] ?? "#000";
    const eps = e.table.map((r) => r[0]);
    const vals = e.table.map((r) => r[1]);
    const label = `m=(${e.m.join(",")})`;
    series.push({ label, x: eps, y: vals, color });
    // extrapolated limit drawn as a flat dashed reference
    series.push({
      label: `${label} limit`,
      x: eps,
      y: eps.map(() => e.gamma),
      color,
      dash: "5 3",
    });
  });
  const panel: PanelSpec = {
    title: "Vanishing-viscosity extrapolation of the damping coefficient",
    xLabel: "epsilon",
    yLabel: "pairing value",
    xScale: "log",
    yScale: "linear",
    series,
  };
  return renderPanels([panel]);
}
