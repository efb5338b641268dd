import { readCsv } from "../csv.js";
import { logLogSlope } from "../fit.js";
import { column, requireColumns } from "../schema.js";
import { Annotation, PALETTE, PanelSpec, renderPanels, Series } from "../svg.js";

export interface ScalingRender {
  svg: string;
  slopes: Map<number, number>;
}

/** Log-log residual scaling with fitted slope annotations per axis. */
export function renderScalingDetailed(inputs: { scaling: string }): ScalingRender {
  const table = readCsv(inputs.scaling);
  requireColumns(table, ["axis", "rho", "residual", "bound"]);
  const axis = column(table, "axis");
  const rho = column(table, "rho");
  const residual = column(table, "residual");
  const bound = column(table, "bound");
  const groups = new Map<number, { rho: number[]; res: number[]; bound: number[] }>();
  for (let i = 0; i < axis.length; i++) {
    const a = axis[i] ?? 0;
    if (!groups.has(a)) groups.set(a, { rho: [], res: [], bound: [] });
    const g = groups.get(a)!;
    g.rho.push(rho[i] ?? NaN);
    g.res.push(residual[i] ?? NaN);
    g.bound.push(bound[i] ?? NaN);
  }
  const series: Series[] = [];
  const annotations: Annotation[] = [];
  const slopes = new Map<number, number>();
  let ci = 0;
  for (const [a, g] of [...groups.entries()].sort((p, q) => p[0] - q[0])) {
    const color = PALETTE[ci % PALETTE.length] ?? "#000";
    const label = a === 0 ? "diagonal" : `axis ${a}`;
    series.push({ label, x: g.rho, y: g.res, color });
    if (a === 0) {
      if (g.bound.some((b) => b > 0)) {
        series.push({
          label: "bound shape",
          x: g.rho,
          y: g.bound,
          color: "#888",
          dash: "3 3",
        });
      }
    } else {
      const slope = logLogSlope(g.rho, g.res);
      slopes.set(a, slope);
      annotations.push({
        text: `axis ${a} slope = ${slope.toFixed(3)}`,
        xFrac: 0.04,
        yFrac: 0.10 + 0.07 * (ci + 1),
      });
    }
    ci += 1;
  }
  const panel: PanelSpec = {
    title: "Forced-equation residual scaling",
    xLabel: "rho",
    yLabel: "residual L2",
    xScale: "log",
    yScale: "log",
    series,
    annotations,
  };
  return { svg: renderPanels([panel]), slopes };
}

export function renderScaling(inputs: { scaling: string }): string {
  return renderScalingDetailed(inputs).svg;
}
