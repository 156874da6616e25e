import { readFileSync } from "node:fs";
import Papa from "papaparse";

/** Column layout shared with the simulator's CSV output. */
export const COLUMNS = [
  "t", "x", "y", "z", "phi", "theta", "psi",
  "u", "v", "w", "p", "q", "r",
  "x_p", "vpx", "vpy", "vpz", "tau_X", "tau_Xp", "kinetic",
] as const;

export type Column = (typeof COLUMNS)[number];

export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

export interface Table {
  readonly rows: number;
  col(name: Column): Float64Array;
}

class ColumnTable implements Table {
  constructor(readonly rows: number,
              private readonly data: Map<Column, Float64Array>) {}

  col(name: Column): Float64Array {
    const values = this.data.get(name);
    if (!values) throw new SchemaError(`unknown column "${name}"`);
    return values;
  }
}

export function parseTrajectory(text: string, source = "<string>"): Table {
  const parsed = Papa.parse<string[]>(text.trim(), {
    header: false,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new SchemaError(`${source}: ${e.message} (row ${e.row})`);
  }
  const grid = parsed.data;
  if (grid.length < 2) {
    throw new SchemaError(`${source}: need a header and at least one row`);
  }

  const header = grid[0];
  if (header.length !== COLUMNS.length) {
    throw new SchemaError(
      `${source}: expected ${COLUMNS.length} columns, got ${header.length}`);
  }
  for (let i = 0; i < COLUMNS.length; i++) {
    if (header[i] !== COLUMNS[i]) {
      throw new SchemaError(
        `${source}: column ${i + 1} is "${header[i]}", ` +
        `expected "${COLUMNS[i]}"`);
    }
  }

  const rows = grid.length - 1;
  const columns = new Map<Column, Float64Array>();
  for (const name of COLUMNS) columns.set(name, new Float64Array(rows));

  for (let r = 0; r < rows; r++) {
    const line = grid[r + 1];
    if (line.length !== COLUMNS.length) {
      throw new SchemaError(
        `${source}: row ${r + 2} has ${line.length} fields, ` +
        `expected ${COLUMNS.length}`);
    }
    for (let i = 0; i < COLUMNS.length; i++) {
      const value = Number(line[i]);
      if (!Number.isFinite(value)) {
        throw new SchemaError(
          `${source}: row ${r + 2}, column "${COLUMNS[i]}": ` +
          `"${line[i]}" is not a finite number`);
      }
      columns.get(COLUMNS[i])![r] = value;
    }
  }
  return new ColumnTable(rows, columns);
}

export function readTrajectory(path: string): Table {
  return parseTrajectory(readFileSync(path, "utf8"), path);
}

/** Rows with t0 <= t <= t1, in the original order. */
export function sliceWindow(table: Table, t0: number, t1: number): Table {
  const t = table.col("t");
  const keep: number[] = [];
  for (let i = 0; i < table.rows; i++) {
    if (t[i] >= t0 && t[i] <= t1) keep.push(i);
  }
  if (keep.length === 0) {
    throw new SchemaError(`window [${t0}, ${t1}] selects no samples ` +
                          `(data covers [${t[0]}, ${t[table.rows - 1]}])`);
  }
  const columns = new Map<Column, Float64Array>();
  for (const name of COLUMNS) {
    const src = table.col(name);
    const dst = new Float64Array(keep.length);
    for (let i = 0; i < keep.length; i++) dst[i] = src[keep[i]];
    columns.set(name, dst);
  }
  return new ColumnTable(keep.length, columns);
}
