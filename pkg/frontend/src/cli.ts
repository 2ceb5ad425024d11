import { parseArgs } from "node:util";

import { ALL_FIGURES, MissingColumnError, MissingInputError, render } from "./render.js";
import { FigureId } from "./figspec.js";

function usage(): string {
  return [
    "usage: wgqed-figures --figure <id|all> --input-dir <dir> --output-dir <dir>",
    `  figure ids: ${ALL_FIGURES.join(", ")}`,
  ].join("\n");
}

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      options: {
        figure: { type: "string" },
        "input-dir": { type: "string" },
        "output-dir": { type: "string" },
        help: { type: "boolean" },
      },
    });
  } catch (err) {
    console.error(String(err));
    console.error(usage());
    return 2;
  }
  if (parsed.values.help) {
    console.log(usage());
    return 0;
  }
  const figure = parsed.values.figure;
  const inputDir = parsed.values["input-dir"];
  const outputDir = parsed.values["output-dir"];
  if (!figure || !inputDir || !outputDir) {
    console.error(usage());
    return 2;
  }
  const targets = figure === "all" ? ALL_FIGURES : [figure as FigureId];
  for (const id of targets) {
    if (!ALL_FIGURES.includes(id)) {
      console.error(`unknown figure id: ${id}`);
      return 2;
    }
  }
  try {
    for (const id of targets) {
      const path = render(id, inputDir, outputDir);
      console.log(`wrote ${path}`);
    }
  } catch (err) {
    if (err instanceof MissingColumnError || err instanceof MissingInputError) {
      console.error(err.message);
      return 1;
    }
    console.error(err instanceof Error ? err.message : String(err));
    return 1;
  }
  return 0;
}

process.exitCode = main(process.argv.slice(2));
