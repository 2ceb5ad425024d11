import { readFileSync } from "node:fs";

export interface Table {
  metadata: Record<string, string>;
  columns: string[];
  rows: number[][];
}

export class MissingColumnError extends Error {
  constructor(public file: string, public column: string) {
    super(`missing column '${column}' in ${file}`);
    this.name = "MissingColumnError";
  }
}

/** Parse a wgqed CSV artifact: `# key = value` metadata lines, then a header row. */
export function parseCsv(text: string): Table {
  const metadata: Record<string, string> = {};
  let columns: string[] | null = null;
  const rows: number[][] = [];
  for (const line of text.split(/\r?\n/)) {
    if (line.trim() === "") continue;
    if (line.startsWith("# ")) {
      const eq = line.indexOf(" = ");
      if (eq > 0) metadata[line.slice(2, eq)] = line.slice(eq + 3);
      continue;
    }
    if (columns === null) {
      columns = line.split(",");
      continue;
    }
    rows.push(line.split(",").map(Number));
  }
  if (columns === null) {
    throw new Error("empty table: no header row found");
  }
  return { metadata, columns, rows };
}

export function readTable(path: string): Table {
  return parseCsv(readFileSync(path, "utf-8"));
}

export function readReport(path: string): Record<string, unknown> {
  return JSON.parse(readFileSync(path, "utf-8")) as Record<string, unknown>;
}

/** Column values by name; throws MissingColumnError naming the offender. */
export function column(table: Table, name: string, file = "<table>"): number[] {
  const i = table.columns.indexOf(name);
  if (i < 0) throw new MissingColumnError(file, name);
  return table.rows.map((r) => r[i]);
}

/** Rows filtered to those where `name` equals `value` (within fp slack). */
export function rowsWhere(table: Table, name: string, value: number, file = "<table>"): number[][] {
  const i = table.columns.indexOf(name);
  if (i < 0) throw new MissingColumnError(file, name);
  return table.rows.filter((r) => Math.abs(r[i] - value) < 1e-12);
}
