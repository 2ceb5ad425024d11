import { execFileSync, spawnSync } from "node:child_process";
import { cpSync, mkdtempSync, readdirSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

const ROOT = join(__dirname, "..");
const CLI = join(ROOT, "dist", "cli.js");
const FIXTURES = join(__dirname, "fixtures");
const scratch: string[] = [];

function tempDir(): string {
  const dir = mkdtempSync(join(tmpdir(), "wgqed-cli-"));
  scratch.push(dir);
  return dir;
}

beforeAll(() => {
  execFileSync("npx", ["tsc"], { cwd: ROOT });
});

afterAll(() => {
  while (scratch.length) rmSync(scratch.pop()!, { recursive: true, force: true });
});

describe("wgqed-figures CLI", () => {
  it("renders every figure and exits 0", () => {
    const out = tempDir();
    const res = spawnSync("node", [CLI, "--figure", "all",
      "--input-dir", FIXTURES, "--output-dir", out], { encoding: "utf-8" });
    expect(res.status).toBe(0);
    expect(readdirSync(out).sort()).toEqual([
      "fig1.svg", "fig2.svg", "fig3.svg", "fig5.svg", "fig6.svg",
      "figA1.svg", "figA2.svg", "figB1.svg",
    ]);
  });

  it("exits nonzero with a diagnostic when an input is missing", () => {
    const dir = tempDir();
    cpSync(FIXTURES, dir, { recursive: true });
    rmSync(join(dir, "figA2_r3.csv"));
    const res = spawnSync("node", [CLI, "--figure", "figA2",
      "--input-dir", dir, "--output-dir", tempDir()], { encoding: "utf-8" });
    expect(res.status).toBe(1);
    expect(res.stderr).toContain("figA2_r3.csv");
  });

  it("exits 2 on usage errors", () => {
    const res = spawnSync("node", [CLI, "--figure", "fig1"], { encoding: "utf-8" });
    expect(res.status).toBe(2);
    const res2 = spawnSync("node", [CLI, "--nope"], { encoding: "utf-8" });
    expect(res2.status).toBe(2);
  });

  it("rejects unknown figure ids", () => {
    const res = spawnSync("node", [CLI, "--figure", "fig9",
      "--input-dir", FIXTURES, "--output-dir", tempDir()], { encoding: "utf-8" });
    expect(res.status).toBe(2);
    expect(res.stderr).toContain("fig9");
  });
});
