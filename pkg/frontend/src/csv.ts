/** Minimal CSV reading with schema validation for the robustreg outputs. */

import { readFileSync } from "node:fs";

export class SchemaError extends Error {
  constructor(
    public readonly path: string,
    public readonly column: string,
    detail: string,
  ) {
    super(`${path}: column "${column}" ${detail}`);
    this.name = "SchemaError";
  }
}

export interface Table {
  header: string[];
  rows: string[][];
}

/** Parse CSV text. The robustreg writers never quote fields. */
export function parseCsv(text: string): string[][] {
  return text
    .split(/\r?\n/)
    .filter((line) => line.length > 0)
    .map((line) => line.split(","));
}

export function readTable(path: string, requiredColumns: string[]): Table {
  const cells = parseCsv(readFileSync(path, "utf-8"));
  if (cells.length === 0) {
    throw new SchemaError(path, requiredColumns[0] ?? "?", "missing (empty file)");
  }
  const header = cells[0];
  for (const column of requiredColumns) {
    if (!header.includes(column)) {
      throw new SchemaError(path, column, "missing from header");
    }
  }
  for (const row of cells.slice(1)) {
    if (row.length !== header.length) {
      throw new SchemaError(
        path,
        header[Math.min(row.length, header.length - 1)],
        `row has ${row.length} fields, header has ${header.length}`,
      );
    }
  }
  return { header, rows: cells.slice(1) };
}

/** Column accessor; empty cells become NaN. */
export function numericColumn(table: Table, name: string, path: string): number[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new SchemaError(path, name, "missing from header");
  }
  return table.rows.map((row, i) => {
    const cell = row[idx];
    if (cell === "") return NaN;
    const value = Number(cell);
    if (Number.isNaN(value)) {
      throw new SchemaError(path, name, `has non-numeric value "${cell}" in data row ${i + 1}`);
    }
    return value;
  });
}

export function stringColumn(table: Table, name: string, path: string): string[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new SchemaError(path, name, "missing from header");
  }
  return table.rows.map((row) => row[idx]);
}
