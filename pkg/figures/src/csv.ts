// CSV access for the collider-lab dataset contract. Values stay strings:
// annotations must be reproduced character-for-character, and coordinates
// are converted to numbers only at plot time.

import { readFileSync } from "node:fs";
import Papa from "papaparse";

export interface Table {
  path: string;
  columns: string[];
  rows: Record<string, string>[];
}

export function readTable(path: string): Table {
  const text = readFileSync(path, "utf8");
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new Error(`${path}: CSV parse error (row ${first.row}): ${first.message}`);
  }
  const columns = parsed.meta.fields ?? [];
  if (columns.length === 0) {
    throw new Error(`${path}: no header row`);
  }
  if (parsed.data.length === 0) {
    throw new Error(`${path}: header-only CSV, nothing to plot`);
  }
  return { path, columns, rows: parsed.data };
}

export function requireColumns(table: Table, names: readonly string[]): void {
  for (const name of names) {
    if (!table.columns.includes(name)) {
      throw new Error(
        `${table.path}: missing required column "${name}" (columns: ${table.columns.join(", ")})`,
      );
    }
  }
}

export interface PanelStats {
  predicate: string;
  fraction: string;
  percent: string;
}

// figstats.csv: one row per panel, written by `collider-lab figures`
export function readFigStats(path: string): Map<string, PanelStats> {
  const table = readTable(path);
  requireColumns(table, ["figure", "predicate", "fraction", "percent"]);
  return new Map(
    table.rows.map((row) => [
      row.figure,
      { predicate: row.predicate, fraction: row.fraction, percent: row.percent },
    ]),
  );
}
