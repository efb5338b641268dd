/** Column contracts of the run artifacts and the mismatch error. */

export class SchemaMismatch extends Error {
  readonly missing: string[];

  constructor(source: string, missing: string[]) {
    super(`schema mismatch in ${source}: missing columns ${missing.join(", ")}`);
    this.name = "SchemaMismatch";
    this.missing = missing;
  }
}

export interface Table {
  readonly source: string;
  readonly columns: string[];
  readonly rows: number[][];
}

export function column(table: Table, name: string): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) throw new SchemaMismatch(table.source, [name]);
  return table.rows.map((r) => {
    const v = r[idx];
    return v === undefined ? NaN : v;
  });
}

export function requireColumns(table: Table, names: string[]): void {
  const missing = names.filter((n) => !table.columns.includes(n));
  if (missing.length > 0) throw new SchemaMismatch(table.source, missing);
}

/** Column names matching a prefix, in file order. */
export function columnsWithPrefix(table: Table, prefix: string): string[] {
  return table.columns.filter((c) => c.startsWith(prefix));
}

/** Mode count inferred from paired re_z_j / im_z_j columns. */
export function modeCount(table: Table): number {
  let n = 0;
  while (
    table.columns.includes(`re_z_${n + 1}`) &&
    table.columns.includes(`im_z_${n + 1}`)
  ) {
    n += 1;
  }
  if (n === 0) throw new SchemaMismatch(table.source, ["re_z_1", "im_z_1"]);
  return n;
}

export function modeModulus(table: Table, j: number): number[] {
  const re = column(table, `re_z_${j}`);
  const im = column(table, `im_z_${j}`);
  return re.map((v, i) => Math.hypot(v, im[i] ?? 0));
}
