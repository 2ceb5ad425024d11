import { join } from "node:path";

import { Table, column, readReport, readTable } from "./csv.js";
import { FigureId } from "./figspec.js";
import { Scale, extent, linearScale, logScale, positiveExtent } from "./scale.js";
import
  {
    PanelBox,
    SvgBuilder,
    drawAxes,
    drawHeatmap,
    heatColor,
    slopeGuide,
    verticalGuide,
  } from "./svg.js";

const SERIES_COLORS = ["#1f6fb4", "#d7342b", "#e8a022", "#3b9e4d", "#7e57c2", "#455a64"];

interface LoadedInputs {
  dir: string;
  table(name: string): Table;
  report(name: string): Record<string, unknown>;
}

export function makeLoader(dir: string): LoadedInputs {
  const cache = new Map<string, Table>();
  return {
    dir,
    table(name: string): Table {
      if (!cache.has(name)) cache.set(name, readTable(join(dir, name)));
      return cache.get(name)!;
    },
    report(name: string): Record<string, unknown> {
      return readReport(join(dir, name));
    },
  };
}

function panelGrid(svg: SvgBuilder, count: number, perRow: number): PanelBox[] {
  const margin = { left: 62, right: 18, top: 28, bottom: 48 };
  const rows = Math.ceil(count / perRow);
  const w = (svg.width - (margin.left + margin.right) * perRow) / perRow;
  const h = (svg.height - (margin.top + margin.bottom) * rows) / rows;
  const boxes: PanelBox[] = [];
  for (let i = 0; i < count; i += 1) {
    const r = Math.floor(i / perRow);
    const c = i % perRow;
    boxes.push({
      x: margin.left + c * (w + margin.left + margin.right),
      y: margin.top + r * (h + margin.top + margin.bottom),
      width: w,
      height: h,
    });
  }
  return boxes;
}

function seriesSplit(table: Table, file: string): Map<string, Array<[number, number]>> {
  const n = column(table, "N", file);
  const v = column(table, "value", file);
  const si = table.columns.indexOf("series");
  const out = new Map<string, Array<[number, number]>>();
  table.rows.forEach((row, i) => {
    const key = si >= 0 ? String(row[si]) : "1";
    if (!out.has(key)) out.set(key, []);
    out.get(key)!.push([n[i], v[i]]);
  });
  return out;
}

function gridValues(table: Table): number[][] {
  return table.rows.map((r) => r.slice());
}

function drawCurve(
  svg: SvgBuilder,
  xs: Scale,
  ys: Scale,
  points: Array<[number, number]>,
  color: string,
  markers = false,
): void {
  const mapped = points
    .filter(([x, y]) => Number.isFinite(x) && Number.isFinite(y))
    .filter(([x, y]) => insideDomain(xs, x) && insideDomain(ys, y))
    .map(([x, y]) => [xs.map(x), ys.map(y)] as [number, number]);
  svg.polyline(mapped, `stroke="${color}" stroke-width="1.6"`);
  if (markers) {
    for (const [px, py] of mapped) svg.circle(px, py, 2.4, `fill="${color}"`);
  }
}

function insideDomain(scale: Scale, v: number): boolean {
  const [d0, d1] = scale.domain;
  return v >= Math.min(d0, d1) - 1e-12 && v <= Math.max(d0, d1) + 1e-12;
}

export function buildFig1(inputs: LoadedInputs): string {
  const svg = new SvgBuilder(900, 640);
  const [bShift, bDecay, bScaling] = [
    { x: 70, y: 30, width: 360, height: 240 },
    { x: 520, y: 30, width: 360, height: 240 },
    { x: 70, y: 360, width: 360, height: 230 },
  ];
  const modes = inputs.table("fig1_modes.csv");
  const file = "fig1_modes.csv";
  const k = column(modes, "k_dom_over_pi", file);
  const J = column(modes, "J", file);
  const G = column(modes, "Gamma", file);
  const disp = inputs.table("fig1_dispersion.csv");
  const dk = column(disp, "k_over_pi", "fig1_dispersion.csv");
  const dj = column(disp, "J_k", "fig1_dispersion.csv");
  const k1d = Number(modes.metadata["k1d_d_over_pi"] ?? 0.2);

  const xs = linearScale([0, 1], [bShift.x, bShift.x + bShift.width]);
  const ysJ = linearScale(extent([...J, ...dj]), [bShift.y + bShift.height, bShift.y]);
  drawAxes(svg, bShift, xs, ysJ, "k d / pi", "J / Gamma_1D", "frequency shifts");
  drawCurve(svg, xs, ysJ, dk.map((v, i) => [v, dj[i]] as [number, number]), "#1f6fb4");
  k.forEach((kv, i) => svg.circle(xs.map(kv), ysJ.map(J[i]), 3, 'fill="none" stroke="#d7342b" stroke-width="1.3"'));
  verticalGuide(svg, bShift, xs, k1d, "guide-k1d");

  const xs2 = linearScale([0, 1], [bDecay.x, bDecay.x + bDecay.width]);
  const ysG = logScale(positiveExtent(G), [bDecay.y + bDecay.height, bDecay.y]);
  drawAxes(svg, bDecay, xs2, ysG, "k d / pi", "Gamma / Gamma_1D", "decay rates");
  k.forEach((kv, i) => {
    if (G[i] > 0) svg.circle(xs2.map(kv), ysG.map(G[i]), 3, 'fill="none" stroke="#d7342b" stroke-width="1.3"');
  });
  verticalGuide(svg, bDecay, xs2, k1d, "guide-k1d");

  const scaling = inputs.table("fig1_scaling.csv");
  const series = seriesSplit(scaling, "fig1_scaling.csv");
  const allN = column(scaling, "N", "fig1_scaling.csv");
  const allV = column(scaling, "value", "fig1_scaling.csv");
  const xs3 = logScale(positiveExtent(allN), [bScaling.x, bScaling.x + bScaling.width]);
  const ys3 = logScale(positiveExtent(allV), [bScaling.y + bScaling.height, bScaling.y]);
  drawAxes(svg, bScaling, xs3, ys3, "N", "Gamma_xi / Gamma_1D", "subradiant scaling");
  let ci = 0;
  for (const [label, pts] of series) {
    drawCurve(svg, xs3, ys3, pts, SERIES_COLORS[ci % SERIES_COLORS.length], true);
    const last = pts[pts.length - 1];
    svg.text(xs3.map(last[0]) + 5, ys3.map(last[1]), `xi=${label}`, 'font-size="9"');
    ci += 1;
  }
  const nRef = Math.min(...allN);
  const vRef = Math.min(...allV.filter((v) => v > 0)) * 8;
  slopeGuide(svg, xs3, ys3, -3, nRef, vRef, Math.max(...allN), "guide-ncubed");
  svg.text(20, 620, "dashed guides: k = +-k_1D; N^-3 power law", 'font-size="10" fill="#555"');
  return svg.render();
}

export function buildFig2(inputs: LoadedInputs): string {
  const svg = new SvgBuilder(900, 620);
  const boxes = panelGrid(svg, 3, 3).map((b) => ({ ...b, height: 230 }));
  for (const [panel, name, title] of [
    [boxes[0], "fig2_grid_k02.csv", "pair probability, k1D d = 0.2 pi"],
    [boxes[1], "fig2_grid_k05.csv", "pair probability, k1D d = 0.5 pi"],
  ] as Array<[PanelBox, string, string]>) {
    const grid = gridValues(inputs.table(name));
    const n = grid.length;
    const xs = linearScale([1, n], [panel.x, panel.x + panel.width]);
    const ys = linearScale([1, n], [panel.y + panel.height, panel.y]);
    drawAxes(svg, panel, xs, ys, "site m", "site n", title);
    const flat = grid.flat().filter((v) => Number.isFinite(v));
    drawHeatmap(svg, panel, grid, Math.min(...flat), Math.max(...flat));
  }
  const fmap = inputs.table("fig2_fidelity_map.csv");
  const file = "fig2_fidelity_map.csv";
  const k1 = column(fmap, "k1_over_pi", file);
  const k2 = column(fmap, "k2_over_pi", file);
  const F = column(fmap, "F_ansatz", file);
  const panel = boxes[2];
  const xs = linearScale([0, 1.02], [panel.x, panel.x + panel.width]);
  const ys = linearScale([0, 1.02], [panel.y + panel.height, panel.y]);
  drawAxes(svg, panel, xs, ys, "k1 d / pi", "k2 d / pi", "ansatz fidelity (N = 50)");
  F.forEach((f, i) => {
    if (!Number.isFinite(k1[i]) || !Number.isFinite(k2[i])) return;
    svg.circle(xs.map(k1[i]), ys.map(k2[i]), 3.2, `fill="${heatColor(f)}"`);
    svg.circle(xs.map(k2[i]), ys.map(k1[i]), 3.2, `fill="${heatColor(f)}"`);
  });
  svg.text(panel.x, panel.y + panel.height + 42,
    "color: F = 0 (dark) to 1 (bright)", 'font-size="10" fill="#555"');
  return svg.render();
}

export function buildFig3(inputs: LoadedInputs): string {
  const svg = new SvgBuilder(900, 600);
  const traj = inputs.table("fig3_trajectory.csv");
  const file = "fig3_trajectory.csv";
  const t = column(traj, "t", file);
  const p2 = column(traj, "p2", file);
  const fid = column(traj, "F_target", file);
  const main: PanelBox = { x: 70, y: 30, width: 780, height: 220 };
  const xs = linearScale([0, Math.max(...t)], [main.x, main.x + main.width]);
  const ys = linearScale([0, 1.05], [main.y + main.height, main.y]);
  drawAxes(svg, main, xs, ys, "Gamma_1D t", "p2, F", "two-excitation survival");
  drawCurve(svg, xs, ys, t.map((tv, i) => [tv, p2[i]] as [number, number]), SERIES_COLORS[0]);
  drawCurve(svg, xs, ys, t.map((tv, i) => [tv, fid[i]] as [number, number]), SERIES_COLORS[1]);
  svg.text(main.x + 8, main.y + 14, "p2 (blue), F_xi1 (red)", 'font-size="10"');
  const snapshots: Array<[string, string]> = [
    ["fig3_trajectory_snapshot_t0.csv", "t = 0"],
    ["fig3_trajectory_snapshot_t5.csv", "t = 5"],
    ["fig3_trajectory_snapshot_t20.csv", "t = 20"],
  ];
  const boxes = panelGrid(svg, 3, 3).map((b) => ({ ...b, y: 360, height: 180 }));
  snapshots.forEach(([name, label], idx) => {
    const grid = gridValues(inputs.table(name));
    const n = grid.length;
    const panel = boxes[idx];
    const gx = linearScale([1, n], [panel.x, panel.x + panel.width]);
    const gy = linearScale([1, n], [panel.y + panel.height, panel.y]);
    drawAxes(svg, panel, gx, gy, "site n", "site m", label);
    const flat = grid.flat().filter((v) => Number.isFinite(v));
    drawHeatmap(svg, panel, grid, 0, Math.max(...flat, 1e-12));
    const snapT = Number(label.replace("t = ", ""));
    verticalGuide(svg, main, xs, snapT, "guide-snapshot-time", "#888");
  });
  return svg.render();
}

export function buildFig5(inputs: LoadedInputs): string {
  const svg = new SvgBuilder(900, 620);
  const left: PanelBox = { x: 70, y: 30, width: 340, height: 220 };
  const right: PanelBox = { x: 520, y: 30, width: 340, height: 220 };
  const heat: PanelBox = { x: 70, y: 340, width: 340, height: 220 };
  const runs: Array<[string, string]> = [
    ["fig5a_i.csv", "gamma_d = 0"],
    ["fig5a_ii.csv", "gamma_d = 0.01"],
    ["fig5a_iii.csv", "gamma_d = 0.1"],
  ];
  let tMax = 0;
  for (const [name] of runs) {
    tMax = Math.max(tMax, ...column(inputs.table(name), "t", name));
  }
  const xsL = linearScale([0, tMax], [left.x, left.x + left.width]);
  const ysL = linearScale([0, 0.6], [left.y + left.height, left.y]);
  drawAxes(svg, left, xsL, ysL, "Gamma_1D t", "p2", "prepared-state survival");
  const xsR = linearScale([0, tMax], [right.x, right.x + right.width]);
  const ysR = linearScale([0, 1.05], [right.y + right.height, right.y]);
  drawAxes(svg, right, xsR, ysR, "Gamma_1D t", "F_xi1", "conditional fidelity");
  runs.forEach(([name, label], i) => {
    const tab = inputs.table(name);
    const t = column(tab, "t", name);
    const p2 = column(tab, "p2", name);
    const F = column(tab, "F_xi1", name);
    drawCurve(svg, xsL, ysL, t.map((tv, j) => [tv, p2[j]] as [number, number]), SERIES_COLORS[i]);
    drawCurve(svg, xsR, ysR, t.map((tv, j) => [tv, F[j]] as [number, number]), SERIES_COLORS[i]);
    svg.text(right.x + right.width - 120, right.y + 16 + 12 * i, label,
      `font-size="10" fill="${SERIES_COLORS[i]}"`);
  });
  const grid = inputs.table("fig5b_grid.csv");
  const file = "fig5b_grid.csv";
  const gps = [...new Set(column(grid, "gamma_prime", file))].sort((a, b) => a - b);
  const gds = [...new Set(column(grid, "gamma_deph", file))].sort((a, b) => a - b);
  const F = column(grid, "max_fidelity", file);
  const cell = new Map<string, number>();
  grid.rows.forEach((row, i) => {
    cell.set(`${row[0]}|${row[1]}`, F[i]);
  });
  const values = gds.map((gd) => gps.map((gp) => cell.get(`${gp}|${gd}`) ?? NaN));
  const xs = logScale([gps[0] / 1.5, gps[gps.length - 1] * 1.5], [heat.x, heat.x + heat.width]);
  const ys = logScale([gds[0] / 1.5, gds[gds.length - 1] * 1.5], [heat.y + heat.height, heat.y]);
  drawAxes(svg, heat, xs, ys, "Gamma' / Gamma_1D", "gamma_d / Gamma_1D", "max_t F (p2 >= 0.2)");
  drawHeatmap(svg, heat, values, 0.3, 1.0);
  // mark cells at or above the 75% anti-bunching threshold
  gds.forEach((gd, i) => {
    gps.forEach((gp, j) => {
      const v = values[i][j];
      if (Number.isFinite(v) && v >= 0.75) {
        svg.circle(xs.map(gp), ys.map(gd), 3,
          'class="guide-p-floor" fill="none" stroke="#000" stroke-dasharray="2,2"');
      }
    });
  });
  svg.text(heat.x, heat.y + heat.height + 42,
    "dashed circles: max fidelity >= 0.75", 'font-size="10" fill="#555"');
  return svg.render();
}

export function buildFig6(inputs: LoadedInputs): string {
  const svg = new SvgBuilder(900, 620);
  const surfaceBox: PanelBox = { x: 70, y: 30, width: 480, height: 300 };
  const rightBox: PanelBox = { x: 620, y: 30, width: 260, height: 300 };
  const tab = inputs.table("fig6_t2.csv");
  const file = "fig6_t2.csv";
  const t = column(tab, "t", file);
  const tau = column(tab, "tau", file);
  const T2 = column(tab, "T2", file);
  const ts = [...new Set(t)].sort((a, b) => a - b);
  const taus = [...new Set(tau)].sort((a, b) => a - b);
  const idx = new Map<string, number>();
  tab.rows.forEach((row, i) => idx.set(`${row[0]}|${row[1]}`, T2[i]));
  const values = ts.map((tv) => taus.map((tauv) => idx.get(`${tv}|${tauv}`) ?? NaN));
  const finite = T2.filter((v) => Number.isFinite(v));
  const xs = linearScale([0, taus[taus.length - 1]], [surfaceBox.x, surfaceBox.x + surfaceBox.width]);
  const ys = linearScale([0, ts[ts.length - 1] || 1], [surfaceBox.y + surfaceBox.height, surfaceBox.y]);
  drawAxes(svg, surfaceBox, xs, ys, "Gamma_1D tau", "Gamma_1D t", "T2(t, tau)");
  drawHeatmap(svg, surfaceBox, values, 0, Math.max(...finite) * 0.25);
  const maxima = inputs.report("fig6_t2_maxima.json") as {
    predicted_tau_maxima_odd_n?: number[];
  };
  for (const tm of maxima.predicted_tau_maxima_odd_n ?? []) {
    verticalGuide(svg, surfaceBox, xs, tm, "guide-tau-max", "#d7342b");
  }
  const lastRow = values[values.length - 1];
  const eig = inputs.table("fig6_t2_eigenstate.csv");
  const eigT = column(eig, "t", "fig6_t2_eigenstate.csv");
  const eigRows = eig.rows.filter((r) => r[0] === Math.max(...eigT));
  const ysR = linearScale([0, Math.max(...lastRow.filter(Number.isFinite), 1e-12) * 1.1],
    [rightBox.y + rightBox.height, rightBox.y]);
  const xsR = linearScale([0, taus[taus.length - 1]], [rightBox.x, rightBox.x + rightBox.width]);
  drawAxes(svg, rightBox, xsR, ysR, "Gamma_1D tau", "T2", `late-t cut`);
  drawCurve(svg, xsR, ysR, taus.map((tv, i) => [tv, lastRow[i]] as [number, number]), SERIES_COLORS[0]);
  drawCurve(svg, xsR, ysR,
    eigRows.map((r) => [r[1], r[2]] as [number, number]), SERIES_COLORS[1]);
  for (const tm of maxima.predicted_tau_maxima_odd_n ?? []) {
    verticalGuide(svg, rightBox, xsR, tm, "guide-tau-max", "#d7342b");
  }
  svg.text(70, 600, "red dashed lines: tau_max = n pi / |J1 - J2|, n odd", 'font-size="10" fill="#555"');
  return svg.render();
}

export function buildFigA1(inputs: LoadedInputs): string {
  const svg = new SvgBuilder(900, 560);
  const box: PanelBox = { x: 80, y: 40, width: 740, height: 430 };
  const files: Array<[string, string]> = [
    ["figA1_02pi_xi1.csv", "0.2 pi, xi=1"],
    ["figA1_047pi_xi1.csv", "0.47 pi, xi=1"],
    ["figA1_05pi_xi1.csv", "0.5 pi, xi=1"],
    ["figA1_05pi_xi2.csv", "0.5 pi, xi=2"],
    ["figA1_05pi_xi3.csv", "0.5 pi, xi=3"],
  ];
  const allN: number[] = [];
  const allV: number[] = [];
  const curves: Array<[string, Array<[number, number]>]> = [];
  for (const [name, label] of files) {
    const tab = inputs.table(name);
    const n = column(tab, "N", name);
    const v = column(tab, "value", name);
    allN.push(...n);
    allV.push(...v);
    curves.push([label, n.map((nv, i) => [nv, v[i]] as [number, number])]);
  }
  const xs = logScale(positiveExtent(allN), [box.x, box.x + box.width]);
  const ys = logScale(positiveExtent(allV), [box.y + box.height, box.y]);
  drawAxes(svg, box, xs, ys, "N", "1 - F", "ansatz infidelity scaling");
  curves.forEach(([label, pts], i) => {
    drawCurve(svg, xs, ys, pts, SERIES_COLORS[i % SERIES_COLORS.length], true);
    svg.text(box.x + 12, box.y + 16 + 12 * i, label,
      `font-size="10" fill="${SERIES_COLORS[i % SERIES_COLORS.length]}"`);
  });
  const nLo = Math.min(...allN);
  const nHi = Math.max(...allN);
  slopeGuide(svg, xs, ys, -1, nLo, Math.max(...allV) * 1.1, nHi, "guide-slope-1");
  slopeGuide(svg, xs, ys, -2, nLo, Math.min(...allV) * 40, nHi, "guide-slope-2");
  svg.text(80, 520, "dashed guides: N^-1 and N^-2", 'font-size="10" fill="#555"');
  return svg.render();
}

export function buildFigA2(inputs: LoadedInputs): string {
  const svg = new SvgBuilder(900, 520);
  const boxes: PanelBox[] = [
    { x: 80, y: 40, width: 340, height: 380 },
    { x: 520, y: 40, width: 340, height: 380 },
  ];
  (["figA2_r2.csv", "figA2_r3.csv"] as const).forEach((name, p) => {
    const tab = inputs.table(name);
    const series = seriesSplit(tab, name);
    const n = column(tab, "N", name);
    const v = column(tab, "value", name).map(Math.abs);
    const box = boxes[p];
    const xs = logScale(positiveExtent(n), [box.x, box.x + box.width]);
    const ys = logScale(positiveExtent(v), [box.y + box.height, box.y]);
    drawAxes(svg, box, xs, ys, "N", `|r${p + 2}|`, `decay additivity, m = ${p + 2}`);
    let i = 0;
    for (const [label, pts] of series) {
      const absPts = pts.map(([x, y]) => [x, Math.abs(y)] as [number, number]);
      drawCurve(svg, xs, ys, absPts, SERIES_COLORS[i % SERIES_COLORS.length], true);
      i += 1;
    }
    slopeGuide(svg, xs, ys, -1, Math.min(...n), Math.max(...v) * 1.2, Math.max(...n), "guide-slope-1");
  });
  svg.text(80, 490, "dashed guide: N^-1", 'font-size="10" fill="#555"');
  return svg.render();
}

export function buildFigB1(inputs: LoadedInputs): string {
  const svg = new SvgBuilder(900, 540);
  const tab = inputs.table("figB1_transfer.csv");
  const file = "figB1_transfer.csv";
  const mex = column(tab, "m_ex", file);
  const gp = column(tab, "gamma_prime", file);
  const gd = column(tab, "gamma_deph", file);
  const pTra = column(tab, "p_transfer", file);
  const fid = column(tab, "fidelity", file);
  const boxes = panelGrid(svg, 4, 2).map((b) => ({ ...b, height: 170 }));
  const panels: Array<[number, number[], string]> = [
    [1, pTra, "p_transfer, m = 1"],
    [1, fid, "fidelity, m = 1"],
    [2, pTra, "p_transfer, m = 2"],
    [2, fid, "fidelity, m = 2"],
  ];
  panels.forEach(([m, vals, title], idx) => {
    const sel = tab.rows.map((_, i) => i).filter((i) => mex[i] === m);
    const gps = [...new Set(sel.map((i) => gp[i]))].sort((a, b) => a - b);
    const gds = [...new Set(sel.map((i) => gd[i]))].sort((a, b) => a - b);
    const values = gds.map((g2) => gps.map((g1) => {
      const i = sel.find((j) => gp[j] === g1 && gd[j] === g2);
      return i === undefined ? NaN : vals[i];
    }));
    const box = boxes[idx];
    const xs = linearScale([-0.5, gps.length - 0.5], [box.x, box.x + box.width]);
    const ys = linearScale([-0.5, gds.length - 0.5], [box.y + box.height, box.y]);
    svg.rect(box.x, box.y, box.width, box.height, 'fill="none" stroke="#222"');
    svg.text(box.x + box.width / 2, box.y - 6, title, 'text-anchor="middle" font-size="12"');
    drawHeatmap(svg, box, values, 0, 1);
    gps.forEach((g1, j) => svg.text(xs.map(j), box.y + box.height + 14, String(g1),
      'text-anchor="middle" font-size="9"'));
    gds.forEach((g2, i2) => svg.text(box.x - 6, ys.map(i2) + 3, String(g2),
      'text-anchor="end" font-size="9"'));
    values.forEach((rowVals, i2) => rowVals.forEach((v, j) => {
      if (Number.isFinite(v)) {
        svg.text(xs.map(j), ys.map(i2) + 3, v.toFixed(2), 'text-anchor="middle" font-size="9"');
      }
    }));
    svg.text(box.x + box.width / 2, box.y + box.height + 30, "Gamma' / Gamma_1D",
      'text-anchor="middle" font-size="10"');
  });
  return svg.render();
}

export const FIGURE_BUILDERS: Record<FigureId, (inputs: LoadedInputs) => string> = {
  fig1: buildFig1,
  fig2: buildFig2,
  fig3: buildFig3,
  fig5: buildFig5,
  fig6: buildFig6,
  figA1: buildFigA1,
  figA2: buildFigA2,
  figB1: buildFigB1,
};
