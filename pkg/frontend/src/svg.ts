/** Deterministic SVG scene building: scales, ticks, axes, primitives.
 *
 * Everything is plain string assembly so identical inputs produce
 * byte-identical documents.
 */

export interface Scale {
  (value: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const fn = ((value: number) => r0 + ((value - d0) / span) * (r1 - r0)) as Scale;
  fn.domain = domain;
  fn.range = range;
  return fn;
}

/** Round tick positions covering the domain, about `count` of them. */
export function niceTicks(domain: [number, number], count = 6): number[] {
  const [lo, hi] = domain;
  if (!(hi > lo)) return [lo];
  const rawStep = (hi - lo) / Math.max(count - 1, 1);
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const candidates = [1, 2, 2.5, 5, 10].map((m) => m * mag);
  const step = candidates.find((s) => (hi - lo) / s <= count) ?? candidates[4];
  const start = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let t = start; t <= hi + step * 1e-9; t += step) {
    ticks.push(Math.abs(t) < step * 1e-9 ? 0 : t);
  }
  return ticks;
}

export function formatTick(value: number): string {
  if (value === 0) return "0";
  const abs = Math.abs(value);
  if (abs >= 1e4 || abs < 1e-3) return value.toExponential(0);
  return Number(value.toPrecision(4)).toString();
}

const escape = (s: string) =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");

export function el(tag: string, attrs: Record<string, string | number>, body = ""): string {
  const rendered = Object.entries(attrs)
    .map(([key, value]) => `${key}="${typeof value === "number" ? round(value) : escape(value)}"`)
    .join(" ");
  return body === "" && tag !== "text"
    ? `<${tag} ${rendered}/>`
    : `<${tag} ${rendered}>${body}</${tag}>`;
}

const round = (x: number) => String(Math.round(x * 100) / 100);

export function text(x: number, y: number, content: string, attrs: Record<string, string | number> = {}): string {
  return el("text", { x, y, "font-family": "sans-serif", "font-size": 11, ...attrs }, escape(content));
}

export function polyline(points: Array<[number, number]>, stroke: string, attrs: Record<string, string | number> = {}): string {
  const pts = points.map(([x, y]) => `${round(x)},${round(y)}`).join(" ");
  return el("polyline", { points: pts, fill: "none", stroke, "stroke-width": 1.5, ...attrs });
}

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

export interface Frame {
  width: number;
  height: number;
  left: number;
  right: number;
  top: number;
  bottom: number;
}

export const DEFAULT_FRAME: Frame = {
  width: 720,
  height: 480,
  left: 70,
  right: 20,
  top: 30,
  bottom: 50,
};

export interface Axes {
  x: Scale;
  y: Scale;
  parts: string[];
}

/** Draw a framed pair of axes with ticks and labels. */
export function axes(
  frame: Frame,
  xDomain: [number, number],
  yDomain: [number, number],
  xLabel: string,
  yLabel: string,
  yTickFormat: (v: number) => string = formatTick,
  yOffsetTop = 0,
  plotHeight?: number,
): Axes {
  const top = frame.top + yOffsetTop;
  const bottom = plotHeight === undefined ? frame.height - frame.bottom : top + plotHeight;
  const x = linearScale(xDomain, [frame.left, frame.width - frame.right]);
  const y = linearScale(yDomain, [bottom, top]);
  const parts: string[] = [];
  parts.push(el("rect", {
    x: frame.left, y: top,
    width: frame.width - frame.right - frame.left,
    height: bottom - top,
    fill: "none", stroke: "#333", "stroke-width": 1,
  }));
  for (const tick of niceTicks(xDomain)) {
    const px = x(tick);
    parts.push(el("line", { x1: px, y1: bottom, x2: px, y2: bottom + 4, stroke: "#333" }));
    parts.push(text(px, bottom + 16, formatTick(tick), { "text-anchor": "middle" }));
  }
  for (const tick of niceTicks(yDomain)) {
    const py = y(tick);
    parts.push(el("line", { x1: frame.left - 4, y1: py, x2: frame.left, y2: py, stroke: "#333" }));
    parts.push(el("line", {
      x1: frame.left, y1: py, x2: frame.width - frame.right, y2: py,
      stroke: "#ddd", "stroke-width": 0.5,
    }));
    parts.push(text(frame.left - 7, py + 3.5, yTickFormat(tick), { "text-anchor": "end" }));
  }
  parts.push(text((frame.left + frame.width - frame.right) / 2, bottom + 34, xLabel, { "text-anchor": "middle" }));
  parts.push(text(14, (top + bottom) / 2, yLabel, {
    "text-anchor": "middle",
    transform: `rotate(-90 14 ${Math.round((top + bottom) / 2)})`,
  }));
  return { x, y, parts };
}

export function legend(frame: Frame, entries: Array<[string, string]>, yStart?: number): string[] {
  const parts: string[] = [];
  const x0 = frame.width - frame.right - 170;
  let y0 = yStart ?? frame.top + 12;
  for (const [name, color] of entries) {
    parts.push(el("line", { x1: x0, y1: y0 - 4, x2: x0 + 22, y2: y0 - 4, stroke: color, "stroke-width": 2 }));
    parts.push(text(x0 + 28, y0, name));
    y0 += 16;
  }
  return parts;
}

export function document(frame: Frame, title: string, body: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${frame.width}" height="${frame.height}" viewBox="0 0 ${frame.width} ${frame.height}">`,
    el("rect", { x: 0, y: 0, width: frame.width, height: frame.height, fill: "#ffffff" }),
    text(frame.width / 2, 18, title, { "text-anchor": "middle", "font-size": 13, "font-weight": "bold" }),
    ...body,
    "</svg>",
  ].join("\n");
}
