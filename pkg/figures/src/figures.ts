// Panel and figure assembly. All science numbers come straight out of the
// CSVs; the only arithmetic here is coordinate mapping.

import { writeFileSync } from "node:fs";
import { join } from "node:path";

import { readFigStats, readTable, requireColumns, type PanelStats, type Table } from "./csv.js";
import type { FigureSpec, PanelSpec } from "./figspec.js";
import {
  fmt,
  group,
  line,
  linearScale,
  polyline,
  rect,
  svgDocument,
  text,
  tickLabel,
  ticks,
  type Scale,
} from "./svg.js";

export const PANEL_WIDTH = 360;
export const PANEL_HEIGHT = 320;
const MARGIN = { left: 56, right: 16, top: 34, bottom: 46 };
const PLOT_W = PANEL_WIDTH - MARGIN.left - MARGIN.right;
const PLOT_H = PANEL_HEIGHT - MARGIN.top - MARGIN.bottom;

const SHADE_FILL = "#d9d9d9";
const SERIES_STYLE: Record<string, { label: string; stroke: string; dashed: boolean }> = {
  bias_unadj: { label: "unadjusted", stroke: "#707070", dashed: true },
  bias_adj: { label: "adjusted", stroke: "#111111", dashed: false },
};

function frame(): string {
  return `<rect x="0" y="0" width="${fmt(PLOT_W)}" height="${fmt(PLOT_H)}" fill="none" stroke="#333" stroke-width="1"/>`;
}

function axes(sx: Scale, sy: Scale, xLabel: string, yLabel: string): string[] {
  const parts: string[] = [frame()];
  for (const value of ticks(sx.lo, sx.hi)) {
    const px = sx(value);
    parts.push(line(px, PLOT_H, px, PLOT_H + 4, "#333"));
    parts.push(text(px, PLOT_H + 16, tickLabel(value), { size: 9, anchor: "middle" }));
  }
  for (const value of ticks(sy.lo, sy.hi)) {
    const py = sy(value);
    parts.push(line(-4, py, 0, py, "#333"));
    parts.push(text(-7, py + 3, tickLabel(value), { size: 9, anchor: "end" }));
  }
  parts.push(text(PLOT_W / 2, PLOT_H + 32, xLabel, { anchor: "middle" }));
  parts.push(
    `<text x="${fmt(-40)}" y="${fmt(PLOT_H / 2)}" font-size="11" text-anchor="middle" fill="#222" transform="rotate(-90 ${fmt(-40)} ${fmt(PLOT_H / 2)})">${yLabel}</text>`,
  );
  return parts;
}

function annotation(stats: PanelStats): string {
  return text(6, 14, `${stats.predicate}: ${stats.percent}`, { size: 10, fill: "#333" });
}

function shadeRuns(flags: boolean[]): Array<[number, number]> {
  const runs: Array<[number, number]> = [];
  let start = -1;
  for (let i = 0; i <= flags.length; i += 1) {
    const on = i < flags.length && flags[i];
    if (on && start < 0) start = i;
    if (!on && start >= 0) {
      runs.push([start, i - 1]);
      start = -1;
    }
  }
  return runs;
}

function renderCurvePanel(panel: PanelSpec, table: Table, shadeColumn: string, stats: PanelStats): string[] {
  const xs = table.rows.map((row) => Number(row[panel.x]));
  const values = panel.series.map((column) =>
    table.rows.map((row) => (row[column] === "" ? null : Number(row[column]))),
  );

  const finite = values.flat().filter((v): v is number => v !== null);
  let yLo = Math.min(0, ...finite);
  let yHi = Math.max(0, ...finite);
  const pad = yHi === yLo ? 1 : 0.08 * (yHi - yLo);
  yLo -= pad;
  yHi += pad;

  const sx = linearScale(Math.min(...xs), Math.max(...xs), 0, PLOT_W);
  const sy = linearScale(yLo, yHi, PLOT_H, 0);

  const parts: string[] = [];
  const flags = table.rows.map((row) => row[shadeColumn] === "1");
  for (const [i0, i1] of shadeRuns(flags)) {
    const bandLo = i0 === 0 ? xs[0] : (xs[i0 - 1] + xs[i0]) / 2;
    const bandHi = i1 === xs.length - 1 ? xs[i1] : (xs[i1] + xs[i1 + 1]) / 2;
    parts.push(rect(sx(bandLo), 0, sx(bandHi) - sx(bandLo), PLOT_H, SHADE_FILL, "shade"));
  }

  parts.push(line(0, sy(0), PLOT_W, sy(0), "#bbb"));

  panel.series.forEach((column, s) => {
    const style = SERIES_STYLE[column] ?? { label: column, stroke: "#111", dashed: false };
    let segment: Array<[number, number]> = [];
    const flush = () => {
      if (segment.length > 1) parts.push(polyline(segment, style.stroke, style.dashed));
      segment = [];
    };
    values[s].forEach((v, i) => {
      if (v === null || !Number.isFinite(v)) flush();
      else segment.push([sx(xs[i]), sy(v)]);
    });
    flush();
    parts.push(
      text(PLOT_W - 6, 14 + 12 * s, style.label, { size: 9, anchor: "end", fill: style.stroke }),
    );
  });

  parts.push(...axes(sx, sy, panel.xLabel, panel.yLabel));
  parts.push(annotation(stats));
  return parts;
}

function renderPlanePanel(panel: PanelSpec, table: Table, shadeColumn: string, stats: PanelStats): string[] {
  const yColumn = panel.y as string;
  const xs = [...new Set(table.rows.map((row) => row[panel.x]))].map(Number);
  const ys = [...new Set(table.rows.map((row) => row[yColumn]))].map(Number);
  const dx = (xs[xs.length - 1] - xs[0]) / (xs.length - 1);
  const dy = (ys[ys.length - 1] - ys[0]) / (ys.length - 1);

  const sx = linearScale(xs[0] - dx / 2, xs[xs.length - 1] + dx / 2, 0, PLOT_W);
  const sy = linearScale(ys[0] - dy / 2, ys[ys.length - 1] + dy / 2, PLOT_H, 0);

  const parts: string[] = [];
  // rows arrive x-major (x outer, y inner); merge vertical runs of shaded
  // cells within each x column into single rects
  let i = 0;
  while (i < table.rows.length) {
    const columnKey = table.rows[i][panel.x];
    let runStart = -1;
    for (; i <= table.rows.length; i += 1) {
      const inColumn = i < table.rows.length && table.rows[i][panel.x] === columnKey;
      const on = inColumn && table.rows[i][shadeColumn] === "1";
      if (on && runStart < 0) runStart = i;
      if (!on && runStart >= 0) {
        const x0 = Number(columnKey) - dx / 2;
        const yLo = Number(table.rows[runStart][yColumn]) - dy / 2;
        const yHi = Number(table.rows[i - 1][yColumn]) + dy / 2;
        parts.push(
          rect(sx(x0), sy(yHi), sx(x0 + dx) - sx(x0), sy(yLo) - sy(yHi), SHADE_FILL, "shade"),
        );
        runStart = -1;
      }
      if (!inColumn) break;
    }
  }

  parts.push(...axes(sx, sy, panel.xLabel, panel.yLabel));
  parts.push(annotation(stats));
  return parts;
}

function renderPanel(
  panel: PanelSpec,
  shadeColumn: string,
  dataDir: string,
  stats: Map<string, PanelStats>,
): string[] {
  const table = readTable(join(dataDir, `${panel.name}.csv`));
  const needed = [panel.x, ...(panel.y === undefined ? [] : [panel.y]), ...panel.series, shadeColumn];
  requireColumns(table, needed);
  const panelStats = stats.get(panel.name);
  if (panelStats === undefined) {
    throw new Error(`figstats.csv: no row for panel "${panel.name}"`);
  }
  const body =
    panel.kind === "curve"
      ? renderCurvePanel(panel, table, shadeColumn, panelStats)
      : renderPlanePanel(panel, table, shadeColumn, panelStats);
  return [
    text(PLOT_W / 2, -14, panel.title, { anchor: "middle", size: 12 }),
    ...body,
  ];
}

export function renderFigure(spec: FigureSpec, dataDir: string): string {
  const stats = readFigStats(join(dataDir, "figstats.csv"));
  const groups = spec.panels.map((panel, index) =>
    group(
      MARGIN.left + index * PANEL_WIDTH,
      MARGIN.top,
      renderPanel(panel, spec.shadeColumn, dataDir, stats),
      "panel",
    ),
  );
  return svgDocument(PANEL_WIDTH * spec.panels.length, PANEL_HEIGHT, groups);
}

export function renderFigureToFile(spec: FigureSpec, dataDir: string, outDir: string): string {
  const svg = renderFigure(spec, dataDir); // build fully before touching disk
  const path = join(outDir, spec.output);
  writeFileSync(path, svg, "utf8");
  return path;
}
