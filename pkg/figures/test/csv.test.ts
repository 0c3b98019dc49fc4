import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { readFigStats, readTable, requireColumns } from "../src/csv.js";

function write(name: string, content: string): string {
  const dir = mkdtempSync(join(tmpdir(), "figcsv-"));
  const path = join(dir, name);
  writeFileSync(path, content, "utf8");
  return path;
}

describe("readTable", () => {
  it("parses rows and keeps values as strings", () => {
    const path = write("t.csv", "a,bias_adj,grey\n-0.5,-0.043956043956,1\n0,0,0\n");
    const table = readTable(path);
    expect(table.columns).toEqual(["a", "bias_adj", "grey"]);
    expect(table.rows).toHaveLength(2);
    expect(table.rows[0].bias_adj).toBe("-0.043956043956");
    expect(table.rows[1].grey).toBe("0");
  });

  it("rejects a header-only file", () => {
    const path = write("empty.csv", "a,bias_adj,grey\n");
    expect(() => readTable(path)).toThrow(/header-only/);
  });

  it("rejects a blank file with a descriptive error", () => {
    const path = write("blank.csv", "\n");
    // papaparse fails delimiter detection before the header check fires;
    // either way the message names the file
    expect(() => readTable(path)).toThrow(/blank\.csv/);
  });
});

describe("requireColumns", () => {
  it("names the missing column and the file", () => {
    const path = write("t.csv", "a,bias_adj\n0,0\n");
    const table = readTable(path);
    expect(() => requireColumns(table, ["a", "grey"])).toThrow(/missing required column "grey"/);
    expect(() => requireColumns(table, ["grey"])).toThrow(new RegExp(path.replace(/[/.]/g, "\\$&")));
    expect(() => requireColumns(table, ["a", "bias_adj"])).not.toThrow();
  });
});

describe("readFigStats", () => {
  it("maps panel name to verbatim predicate and percent strings", () => {
    const path = write(
      "figstats.csv",
      "figure,predicate,fraction,percent\nfig5_b,adjusted_smaller,0.715039517093,71.5%\n",
    );
    const stats = readFigStats(path);
    expect(stats.get("fig5_b")).toEqual({
      predicate: "adjusted_smaller",
      fraction: "0.715039517093",
      percent: "71.5%",
    });
  });

  it("rejects a stats file without the contract columns", () => {
    const path = write("figstats.csv", "figure,share\nfig5_b,0.7\n");
    expect(() => readFigStats(path)).toThrow(/missing required column/);
  });
});
