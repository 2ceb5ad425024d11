export type AxisKind = "linear" | "log";

export interface Scale {
  kind: AxisKind;
  domain: [number, number];
  range: [number, number];
  map(value: number): number;
  ticks(count?: number): number[];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  return {
    kind: "linear",
    domain,
    range,
    map: (v) => r0 + ((v - d0) / span) * (r1 - r0),
    ticks: (count = 5) => {
      const step = niceStep(span / Math.max(1, count));
      const start = Math.ceil(d0 / step) * step;
      const out: number[] = [];
      for (let t = start; t <= d1 + 1e-12 * Math.abs(span); t += step) {
        out.push(roundTo(t, step));
      }
      return out;
    },
  };
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  if (d0 <= 0 || d1 <= 0) {
    throw new Error(`log axis requires positive domain, got [${d0}, ${d1}]`);
  }
  const l0 = Math.log10(d0);
  const l1 = Math.log10(d1);
  const span = l1 - l0 || 1;
  const [r0, r1] = range;
  return {
    kind: "log",
    domain,
    range,
    map: (v) => r0 + ((Math.log10(v) - l0) / span) * (r1 - r0),
    ticks: () => {
      const out: number[] = [];
      for (let e = Math.ceil(l0 - 1e-9); e <= Math.floor(l1 + 1e-9); e += 1) {
        out.push(10 ** e);
      }
      return out.length >= 2 ? out : [d0, d1];
    },
  };
}

function niceStep(raw: number): number {
  const mag = 10 ** Math.floor(Math.log10(raw));
  const norm = raw / mag;
  const nice = norm >= 5 ? 10 : norm >= 2 ? 5 : norm >= 1 ? 2 : 1;
  return nice * mag;
}

function roundTo(value: number, step: number): number {
  const digits = Math.max(0, -Math.floor(Math.log10(step)) + 1);
  return Number(value.toFixed(digits + 2 > 10 ? 10 : digits + 2));
}

export function extent(values: number[], padFraction = 0.05): [number, number] {
  const finite = values.filter((v) => Number.isFinite(v));
  if (finite.length === 0) throw new Error("no finite values for axis extent");
  let lo = Math.min(...finite);
  let hi = Math.max(...finite);
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const pad = (hi - lo) * padFraction;
  return [lo - pad, hi + pad];
}

export function positiveExtent(values: number[]): [number, number] {
  const finite = values.filter((v) => Number.isFinite(v) && v > 0);
  if (finite.length === 0) throw new Error("no positive values for log axis");
  return [Math.min(...finite) / 1.3, Math.max(...finite) * 1.3];
}
