#!/usr/bin/env node
// Render figure SVGs from a collider-lab dataset directory.
//
//   node dist/render.js --data DIR --out DIR [--figure ID]
//
// The data directory is what `collider-lab figures --out DIR` wrote. One
// image per figure id; without --figure, all figures are rendered.

import { mkdirSync } from "node:fs";
import { parseArgs } from "node:util";

import { FIGURES, figureById } from "./figspec.js";
import { renderFigureToFile } from "./figures.js";

function usage(): string {
  const ids = FIGURES.map((fig) => fig.id).join(" ");
  return `usage: render --data DIR --out DIR [--figure ID]\nfigure ids: ${ids}`;
}

function main(): number {
  let values;
  try {
    ({ values } = parseArgs({
      options: {
        data: { type: "string" },
        out: { type: "string" },
        figure: { type: "string" },
        help: { type: "boolean", short: "h" },
      },
    }));
  } catch (error) {
    console.error(`error: ${(error as Error).message}`);
    console.error(usage());
    return 2;
  }
  if (values.help) {
    console.log(usage());
    return 0;
  }
  if (values.data === undefined || values.out === undefined) {
    console.error("error: --data and --out are required");
    console.error(usage());
    return 2;
  }

  try {
    const specs = values.figure === undefined ? FIGURES : [figureById(values.figure)];
    mkdirSync(values.out, { recursive: true });
    for (const spec of specs) {
      console.log(renderFigureToFile(spec, values.data, values.out));
    }
    return 0;
  } catch (error) {
    console.error(`error: ${(error as Error).message}`);
    return 1;
  }
}

process.exit(main());
