import { cpSync, mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { afterEach, describe, expect, it } from "vitest";

import { FIGURE_SPECS } from "../src/figspec.js";
import { ALL_FIGURES, MissingColumnError, MissingInputError, render, validateInputs } from "../src/render.js";

const FIXTURES = join(__dirname, "fixtures");
const cleanups: string[] = [];

function tempDir(): string {
  const dir = mkdtempSync(join(tmpdir(), "wgqed-fig-"));
  cleanups.push(dir);
  return dir;
}

afterEach(() => {
  while (cleanups.length) rmSync(cleanups.pop()!, { recursive: true, force: true });
});

describe("render", () => {
  it("renders all eight canned figures from pre-generated CLI outputs", () => {
    const out = tempDir();
    for (const id of ALL_FIGURES) {
      const path = render(id, FIXTURES, out);
      const svg = readFileSync(path, "utf-8");
      expect(svg.startsWith("<svg ")).toBe(true);
      expect(svg).toContain("</svg>");
    }
    expect(ALL_FIGURES).toHaveLength(8);
  });

  it("keeps the required guide-line annotations", () => {
    const out = tempDir();
    for (const id of ALL_FIGURES) {
      const svg = readFileSync(render(id, FIXTURES, out), "utf-8");
      for (const cls of FIGURE_SPECS[id].annotations) {
        expect(svg, `${id} must carry ${cls}`).toContain(`class="${cls}"`);
      }
    }
  });

  it("fig1 marks k = +-k1D with dashed guides", () => {
    const out = tempDir();
    const svg = readFileSync(render("fig1", FIXTURES, out), "utf-8");
    const guides = svg.match(/class="guide-k1d"[^/]*stroke-dasharray/g) ?? [];
    expect(guides.length).toBeGreaterThanOrEqual(2);
  });

  it("fig6 draws the four odd-n tau_max lines per panel", () => {
    const out = tempDir();
    const svg = readFileSync(render("fig6", FIXTURES, out), "utf-8");
    const guides = svg.match(/class="guide-tau-max"/g) ?? [];
    expect(guides.length).toBeGreaterThanOrEqual(4);
  });

  it("is deterministic", () => {
    const outA = tempDir();
    const outB = tempDir();
    const a = readFileSync(render("figA2", FIXTURES, outA), "utf-8");
    const b = readFileSync(render("figA2", FIXTURES, outB), "utf-8");
    expect(a).toBe(b);
  });

  it("rejects a missing input file by name", () => {
    const dir = tempDir();
    cpSync(FIXTURES, dir, { recursive: true });
    rmSync(join(dir, "fig1_dispersion.csv"));
    try {
      render("fig1", dir, tempDir());
      expect.unreachable();
    } catch (err) {
      expect(err).toBeInstanceOf(MissingInputError);
      expect((err as Error).message).toContain("fig1_dispersion.csv");
    }
  });

  it("rejects a malformed input naming the missing column", () => {
    const dir = tempDir();
    cpSync(FIXTURES, dir, { recursive: true });
    const mangled = readFileSync(join(dir, "fig6_t2.csv"), "utf-8")
      .replace("t,tau,T2", "t,delay,T2");
    writeFileSync(join(dir, "fig6_t2.csv"), mangled);
    try {
      validateInputs("fig6", dir);
      expect.unreachable();
    } catch (err) {
      expect(err).toBeInstanceOf(MissingColumnError);
      expect((err as MissingColumnError).column).toBe("tau");
    }
  });

  it("rejects an empty data file", () => {
    const dir = tempDir();
    cpSync(FIXTURES, dir, { recursive: true });
    writeFileSync(join(dir, "fig6_t2.csv"), "# tool = wgqed\nt,tau,T2\n");
    expect(() => render("fig6", dir, tempDir())).toThrow(/no data rows/);
  });
});
