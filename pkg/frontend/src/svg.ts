import { AxisKind, Scale } from "./scale.js";

const FMT = (v: number): string => {
  if (!Number.isFinite(v)) return "0";
  const s = v.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
};

export interface PanelBox {
  x: number;
  y: number;
  width: number;
  height: number;
}

export class SvgBuilder {
  private parts: string[] = [];

  constructor(public width: number, public height: number) {}

  raw(fragment: string): void {
    this.parts.push(fragment);
  }

  line(x1: number, y1: number, x2: number, y2: number, attrs = ""): void {
    this.parts.push(
      `<line x1="${FMT(x1)}" y1="${FMT(y1)}" x2="${FMT(x2)}" y2="${FMT(y2)}" ${attrs}/>`,
    );
  }

  polyline(points: Array<[number, number]>, attrs: string): void {
    const pts = points
      .filter(([x, y]) => Number.isFinite(x) && Number.isFinite(y))
      .map(([x, y]) => `${FMT(x)},${FMT(y)}`)
      .join(" ");
    this.parts.push(`<polyline fill="none" points="${pts}" ${attrs}/>`);
  }

  circle(cx: number, cy: number, r: number, attrs: string): void {
    this.parts.push(`<circle cx="${FMT(cx)}" cy="${FMT(cy)}" r="${FMT(r)}" ${attrs}/>`);
  }

  rect(x: number, y: number, w: number, h: number, attrs: string): void {
    this.parts.push(
      `<rect x="${FMT(x)}" y="${FMT(y)}" width="${FMT(w)}" height="${FMT(h)}" ${attrs}/>`,
    );
  }

  text(x: number, y: number, content: string, attrs = ""): void {
    this.parts.push(`<text x="${FMT(x)}" y="${FMT(y)}" ${attrs}>${escapeXml(content)}</text>`);
  }

  render(): string {
    return [
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" viewBox="0 0 ${this.width} ${this.height}" font-family="Helvetica, Arial, sans-serif">`,
      `<rect x="0" y="0" width="${this.width}" height="${this.height}" fill="white"/>`,
      ...this.parts,
      "</svg>",
    ].join("\n");
  }
}

function escapeXml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export interface AxisSpec {
  label: string;
  kind?: AxisKind;
}

/** Draw panel frame, ticks, and labels; returns nothing (mutates the builder). */
export function drawAxes(
  svg: SvgBuilder,
  box: PanelBox,
  xScale: Scale,
  yScale: Scale,
  xLabel: string,
  yLabel: string,
  title = "",
): void {
  svg.rect(box.x, box.y, box.width, box.height, 'fill="none" stroke="#222" stroke-width="1"');
  for (const t of xScale.ticks()) {
    const px = xScale.map(t);
    if (px < box.x - 0.5 || px > box.x + box.width + 0.5) continue;
    svg.line(px, box.y + box.height, px, box.y + box.height + 4, 'stroke="#222"');
    svg.text(px, box.y + box.height + 15, tickLabel(t, xScale.kind), 'text-anchor="middle" font-size="10"');
  }
  for (const t of yScale.ticks()) {
    const py = yScale.map(t);
    if (py < box.y - 0.5 || py > box.y + box.height + 0.5) continue;
    svg.line(box.x - 4, py, box.x, py, 'stroke="#222"');
    svg.text(box.x - 6, py + 3, tickLabel(t, yScale.kind), 'text-anchor="end" font-size="10"');
  }
  svg.text(box.x + box.width / 2, box.y + box.height + 30, xLabel, 'text-anchor="middle" font-size="11"');
  svg.raw(
    `<text x="${FMT(box.x - 38)}" y="${FMT(box.y + box.height / 2)}" text-anchor="middle" font-size="11" transform="rotate(-90 ${FMT(box.x - 38)} ${FMT(box.y + box.height / 2)})">${yLabel}</text>`,
  );
  if (title) {
    svg.text(box.x + box.width / 2, box.y - 6, title, 'text-anchor="middle" font-size="12"');
  }
}

function tickLabel(value: number, kind: AxisKind): string {
  if (kind === "log") {
    const e = Math.round(Math.log10(value));
    return `1e${e}`;
  }
  if (value !== 0 && (Math.abs(value) >= 1e4 || Math.abs(value) < 1e-3)) {
    return value.toExponential(0);
  }
  return String(Number(value.toPrecision(4)));
}

/** Vertical dashed guide line across a panel (class name makes tests robust). */
export function verticalGuide(
  svg: SvgBuilder,
  box: PanelBox,
  xScale: Scale,
  value: number,
  cls: string,
  color = "#000",
): void {
  const px = xScale.map(value);
  if (px < box.x || px > box.x + box.width) return;
  svg.line(
    px,
    box.y,
    px,
    box.y + box.height,
    `class="${cls}" stroke="${color}" stroke-dasharray="5,4" stroke-width="1.2"`,
  );
}

/** Power-law guide segment with the given exponent through a reference point. */
export function slopeGuide(
  svg: SvgBuilder,
  xScale: Scale,
  yScale: Scale,
  exponent: number,
  xRef: number,
  yRef: number,
  xEnd: number,
  cls: string,
): void {
  const yEnd = yRef * (xEnd / xRef) ** exponent;
  svg.polyline(
    [
      [xScale.map(xRef), yScale.map(yRef)],
      [xScale.map(xEnd), yScale.map(yEnd)],
    ],
    `class="${cls}" stroke="#888" stroke-dasharray="6,4" stroke-width="1"`,
  );
}

/** Two-color diverging-ish map from 0..1 into a blue->yellow ramp. */
export function heatColor(t: number): string {
  const clamped = Math.max(0, Math.min(1, t));
  const r = Math.round(20 + 235 * clamped);
  const g = Math.round(30 + 200 * clamped);
  const b = Math.round(120 - 90 * clamped + 80 * (1 - clamped));
  return `rgb(${r},${g},${b})`;
}

export function drawHeatmap(
  svg: SvgBuilder,
  box: PanelBox,
  values: number[][],
  vmin: number,
  vmax: number,
): void {
  const nr = values.length;
  const nc = values[0].length;
  const cw = box.width / nc;
  const ch = box.height / nr;
  const span = vmax - vmin || 1;
  for (let i = 0; i < nr; i += 1) {
    for (let j = 0; j < nc; j += 1) {
      const v = values[i][j];
      if (!Number.isFinite(v)) continue;
      const color = heatColor((v - vmin) / span);
      // row 0 is drawn at the bottom (y axis increases upward)
      svg.rect(
        box.x + j * cw,
        box.y + box.height - (i + 1) * ch,
        cw + 0.25,
        ch + 0.25,
        `fill="${color}" stroke="none"`,
      );
    }
  }
}
