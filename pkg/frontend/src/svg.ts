/** Minimal deterministic SVG plotting kit: fixed styles, no timestamps. */

export type Scale = "linear" | "log";

export interface Series {
  label: string;
  x: number[];
  y: number[];
  color: string;
  dash?: string;
}

export interface Annotation {
  text: string;
  xFrac: number;
  yFrac: number;
}

export interface PanelSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  xScale: Scale;
  yScale: Scale;
  series: Series[];
  annotations?: Annotation[];
}

const WIDTH = 640;
const HEIGHT = 420;
const MARGIN = { left: 70, right: 20, top: 36, bottom: 48 };

export const PALETTE = [
  "#1f6fb4",
  "#d1495b",
  "#3a8f5d",
  "#8a5db4",
  "#c98a1f",
  "#4a4a4a",
];

function fmt(v: number): string {
  if (!Number.isFinite(v)) return "0";
  return Number(v.toPrecision(6)).toString();
}

function tickLabel(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(1);
  return Number(v.toPrecision(4)).toString();
}

interface Mapper {
  (v: number): number;
}

function makeScale(
  values: number[],
  scale: Scale,
  outLo: number,
  outHi: number,
): { map: Mapper; ticks: number[] } {
  let vals = values.filter((v) => Number.isFinite(v));
  if (scale === "log") vals = vals.filter((v) => v > 0);
  if (vals.length === 0) vals = [0, 1];
  let lo = Math.min(...vals);
  let hi = Math.max(...vals);
  if (scale === "log") {
    if (lo === hi) {
      lo /= 10;
      hi *= 10;
    }
    const llo = Math.log10(lo);
    const lhi = Math.log10(hi);
    const map: Mapper = (v) =>
      outLo +
      ((Math.log10(Math.max(v, Number.MIN_VALUE)) - llo) / (lhi - llo || 1)) *
        (outHi - outLo);
    const ticks: number[] = [];
    for (let p = Math.ceil(llo); p <= Math.floor(lhi); p++) {
      ticks.push(Math.pow(10, p));
    }
    if (ticks.length === 0) ticks.push(lo, hi);
    if (ticks.length > 8) {
      const stride = Math.ceil(ticks.length / 8);
      const kept = ticks.filter((_, i) => i % stride === 0);
      return { map, ticks: kept };
    }
    return { map, ticks };
  }
  if (lo === hi) {
    lo -= 1;
    hi += 1;
  }
  const pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
  const map: Mapper = (v) => outLo + ((v - lo) / (hi - lo)) * (outHi - outLo);
  const n = 5;
  const ticks = Array.from({ length: n + 1 }, (_, i) => lo + ((hi - lo) * i) / n);
  return { map, ticks };
}

function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
}

export function renderPanels(panels: PanelSpec[]): string {
  const totalH = panels.length * HEIGHT;
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" ` +
      `height="${totalH}" viewBox="0 0 ${WIDTH} ${totalH}" ` +
      `font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${totalH}" fill="white"/>`);
  panels.forEach((panel, pi) => {
    const top = pi * HEIGHT + MARGIN.top;
    const bottom = pi * HEIGHT + HEIGHT - MARGIN.bottom;
    const left = MARGIN.left;
    const right = WIDTH - MARGIN.right;
    const xAll = panel.series.flatMap((s) => s.x);
    const yAll = panel.series.flatMap((s) => s.y);
    const sx = makeScale(xAll, panel.xScale, left, right);
    const sy = makeScale(yAll, panel.yScale, bottom, top);
    parts.push(
      `<text x="${WIDTH / 2}" y="${pi * HEIGHT + 22}" text-anchor="middle" ` +
        `font-size="15">${esc(panel.title)}</text>`,
    );
    // frame
    parts.push(
      `<rect x="${left}" y="${top}" width="${right - left}" ` +
        `height="${bottom - top}" fill="none" stroke="#333" stroke-width="1"/>`,
    );
    for (const t of sx.ticks) {
      const px = sx.map(t);
      if (px < left - 0.5 || px > right + 0.5) continue;
      parts.push(
        `<line x1="${fmt(px)}" y1="${bottom}" x2="${fmt(px)}" ` +
          `y2="${bottom + 5}" stroke="#333"/>`,
        `<text x="${fmt(px)}" y="${bottom + 18}" text-anchor="middle" ` +
          `font-size="10">${esc(tickLabel(t))}</text>`,
      );
    }
    for (const t of sy.ticks) {
      const py = sy.map(t);
      if (py > bottom + 0.5 || py < top - 0.5) continue;
      parts.push(
        `<line x1="${left - 5}" y1="${fmt(py)}" x2="${left}" ` +
          `y2="${fmt(py)}" stroke="#333"/>`,
        `<text x="${left - 8}" y="${fmt(py + 3)}" text-anchor="end" ` +
          `font-size="10">${esc(tickLabel(t))}</text>`,
      );
    }
    parts.push(
      `<text x="${(left + right) / 2}" y="${bottom + 36}" ` +
        `text-anchor="middle" font-size="12">${esc(panel.xLabel)}</text>`,
      `<text x="18" y="${(top + bottom) / 2}" text-anchor="middle" ` +
        `font-size="12" transform="rotate(-90 18 ${(top + bottom) / 2})">` +
        `${esc(panel.yLabel)}</text>`,
    );
    panel.series.forEach((s, si) => {
      const pts: string[] = [];
      for (let i = 0; i < Math.min(s.x.length, s.y.length); i++) {
        const xv = s.x[i] ?? NaN;
        const yv = s.y[i] ?? NaN;
        if (!Number.isFinite(xv) || !Number.isFinite(yv)) continue;
        if (panel.yScale === "log" && yv <= 0) continue;
        if (panel.xScale === "log" && xv <= 0) continue;
        pts.push(`${fmt(sx.map(xv))},${fmt(sy.map(yv))}`);
      }
      const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
      if (pts.length === 1) {
        const [pt] = pts;
        const [cx, cy] = (pt ?? "0,0").split(",");
        parts.push(
          `<circle cx="${cx}" cy="${cy}" r="3" fill="${s.color}"/>`,
        );
      } else if (pts.length > 1) {
        parts.push(
          `<polyline points="${pts.join(" ")}" fill="none" ` +
            `stroke="${s.color}" stroke-width="1.5"${dash}/>`,
        );
      }
      const ly = pi * HEIGHT + MARGIN.top + 14 + 14 * si;
      parts.push(
        `<line x1="${right - 130}" y1="${ly - 4}" x2="${right - 108}" ` +
          `y2="${ly - 4}" stroke="${s.color}" stroke-width="2"${dash}/>`,
        `<text x="${right - 102}" y="${ly}" font-size="11">${esc(s.label)}</text>`,
      );
    });
    for (const a of panel.annotations ?? []) {
      const ax = left + a.xFrac * (right - left);
      const ay = top + a.yFrac * (bottom - top);
      parts.push(
        `<text x="${fmt(ax)}" y="${fmt(ay)}" font-size="12" ` +
          `fill="#222">${esc(a.text)}</text>`,
      );
    }
  });
  parts.push("</svg>");
  return parts.join("\n");
}
