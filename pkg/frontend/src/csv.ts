import { readFileSync } from "node:fs";

import { SchemaMismatch, Table } from "./schema.js";

/** Parse a numeric CSV with a single header row. */
export function parseCsv(text: string, source = "<csv>"): Table {
  const lines = text
    .split(/\r?\n/)
    .map((l) => l.trim())
    .filter((l) => l.length > 0);
  if (lines.length === 0) throw new SchemaMismatch(source, ["<header>"]);
  const header = lines[0];
  if (header === undefined) throw new SchemaMismatch(source, ["<header>"]);
  const columns = header.split(",").map((c) => c.trim());
  const rows: number[][] = [];
  for (const line of lines.slice(1)) {
    const cells = line.split(",").map((c) => Number(c));
    if (cells.length !== columns.length || cells.some((v) => Number.isNaN(v))) {
      throw new SchemaMismatch(source, ["<malformed row>"]);
    }
    rows.push(cells);
  }
  return { source, columns, rows };
}

export function readCsv(path: string): Table {
  return parseCsv(readFileSync(path, "utf-8"), path);
}

export function readJson(path: string): unknown {
  return JSON.parse(readFileSync(path, "utf-8"));
}
