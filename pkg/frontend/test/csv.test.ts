import { describe, expect, it } from "vitest";

import { MissingColumnError, column, parseCsv, rowsWhere } from "../src/csv.js";

const SAMPLE = [
  "# tool = wgqed",
  "# n_qubits = 30",
  "t,p2,F",
  "0,1,0.5",
  "1,0.9,0.6",
  "2,0.8,0.7",
].join("\n");

describe("parseCsv", () => {
  it("splits metadata, header, and numeric rows", () => {
    const table = parseCsv(SAMPLE);
    expect(table.metadata.n_qubits).toBe("30");
    expect(table.columns).toEqual(["t", "p2", "F"]);
    expect(table.rows).toHaveLength(3);
    expect(table.rows[1][1]).toBeCloseTo(0.9);
  });

  it("ignores blank lines", () => {
    const table = parseCsv(SAMPLE + "\n\n");
    expect(table.rows).toHaveLength(3);
  });

  it("rejects tables without a header", () => {
    expect(() => parseCsv("# only = metadata\n")).toThrow(/no header/);
  });
});

describe("column", () => {
  it("extracts values by name", () => {
    const table = parseCsv(SAMPLE);
    expect(column(table, "p2")).toEqual([1, 0.9, 0.8]);
  });

  it("names the missing column in the error", () => {
    const table = parseCsv(SAMPLE);
    try {
      column(table, "tau", "fig6_t2.csv");
      expect.unreachable();
    } catch (err) {
      expect(err).toBeInstanceOf(MissingColumnError);
      expect((err as MissingColumnError).column).toBe("tau");
      expect((err as Error).message).toContain("fig6_t2.csv");
    }
  });
});

describe("rowsWhere", () => {
  it("filters rows by column value", () => {
    const table = parseCsv(SAMPLE);
    expect(rowsWhere(table, "t", 1)).toEqual([[1, 0.9, 0.6]]);
  });
});
