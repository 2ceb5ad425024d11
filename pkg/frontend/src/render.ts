import { existsSync, mkdirSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { column, readTable, MissingColumnError } from "./csv.js";
import { FIGURE_SPECS, FigureId } from "./figspec.js";
import { FIGURE_BUILDERS, makeLoader } from "./figures.js";

export { MissingColumnError };

export class MissingInputError extends Error {
  constructor(public file: string) {
    super(`missing input file: ${file}`);
    this.name = "MissingInputError";
  }
}

/** Validate presence and schema of every input the figure declares. */
export function validateInputs(figureId: FigureId, inputDir: string): void {
  const spec = FIGURE_SPECS[figureId];
  for (const [file, requiredColumns] of Object.entries(spec.inputs)) {
    const path = join(inputDir, file);
    if (!existsSync(path)) throw new MissingInputError(file);
    if (file.endsWith(".json") || requiredColumns.length === 0) {
      if (!file.endsWith(".json")) {
        const table = readTable(path);
        if (table.rows.length === 0) {
          throw new Error(`empty data grid in ${file}`);
        }
      }
      continue;
    }
    const table = readTable(path);
    if (table.rows.length === 0) throw new Error(`no data rows in ${file}`);
    for (const col of requiredColumns) column(table, col, file);
  }
}

/** Render one figure from CLI artifacts; returns the written file path. */
export function render(figureId: FigureId, inputDir: string, outputDir: string): string {
  if (!(figureId in FIGURE_BUILDERS)) {
    throw new Error(`unknown figure id: ${figureId}`);
  }
  validateInputs(figureId, inputDir);
  const svg = FIGURE_BUILDERS[figureId](makeLoader(inputDir));
  for (const cls of FIGURE_SPECS[figureId].annotations) {
    if (!svg.includes(`class="${cls}"`)) {
      throw new Error(`figure ${figureId} lost required annotation '${cls}'`);
    }
  }
  mkdirSync(outputDir, { recursive: true });
  const outPath = join(outputDir, `${figureId}.svg`);
  writeFileSync(outPath, svg);
  return outPath;
}

export const ALL_FIGURES = Object.keys(FIGURE_SPECS) as FigureId[];
