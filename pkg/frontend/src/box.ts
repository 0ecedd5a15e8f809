/** Box plot of final errors per method from a trials CSV. */

import { numericColumn, readTable, stringColumn } from "./csv.js";
import { Frame, DEFAULT_FRAME, axes, document, el, formatTick, text } from "./svg.js";

export const TRIALS_COLUMNS = ["method", "seed", "final_error", "iters", "wall_ms"];

export interface BoxStats {
  method: string;
  low: number;
  q1: number;
  median: number;
  q3: number;
  high: number;
  outliers: number[];
  dropped: number;
}

/** Linear-interpolation quantile on a sorted array. */
export function quantileSorted(sorted: number[], q: number): number {
  if (sorted.length === 1) return sorted[0];
  const pos = q * (sorted.length - 1);
  const lo = Math.floor(pos);
  const hi = Math.ceil(pos);
  const frac = pos - lo;
  return sorted[lo] * (1 - frac) + sorted[hi] * frac;
}

export function boxStats(method: string, values: number[]): BoxStats {
  const finite = values.filter((v) => Number.isFinite(v)).sort((a, b) => a - b);
  if (finite.length === 0) {
    throw new Error(`method ${method} has no finite errors to plot`);
  }
  const q1 = quantileSorted(finite, 0.25);
  const median = quantileSorted(finite, 0.5);
  const q3 = quantileSorted(finite, 0.75);
  const iqr = q3 - q1;
  const loFence = q1 - 1.5 * iqr;
  const hiFence = q3 + 1.5 * iqr;
  const inside = finite.filter((v) => v >= loFence && v <= hiFence);
  return {
    method,
    low: inside[0],
    q1,
    median,
    q3,
    high: inside[inside.length - 1],
    outliers: finite.filter((v) => v < loFence || v > hiFence),
    dropped: values.length - finite.length,
  };
}

export function loadTrials(path: string): BoxStats[] {
  const table = readTable(path, TRIALS_COLUMNS);
  const methods = stringColumn(table, "method", path);
  const errors = numericColumn(table, "final_error", path);
  const byMethod = new Map<string, number[]>();
  methods.forEach((m, i) => {
    if (!byMethod.has(m)) byMethod.set(m, []);
    byMethod.get(m)!.push(errors[i]);
  });
  return [...byMethod.entries()]
    .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
    .map(([method, values]) => boxStats(method, values));
}

export function buildBoxSvg(stats: BoxStats[], frame: Frame = DEFAULT_FRAME): string {
  const all = stats.flatMap((s) => [s.low, s.high, ...s.outliers]).filter((v) => v > 0);
  const yLo = Math.floor(Math.log10(Math.min(...all)));
  const yHi = Math.ceil(Math.log10(Math.max(...all)));
  const yDomain: [number, number] = [yLo, yHi === yLo ? yLo + 1 : yHi];
  const ax = axes(frame, [0, stats.length], yDomain, "", "log10 final error");
  const parts = [...ax.parts];
  const ly = (v: number) => ax.y(Math.log10(Math.max(v, 1e-300)));

  stats.forEach((s, i) => {
    const cx = ax.x(i + 0.5);
    const half = Math.min(30, (ax.x(1) - ax.x(0)) * 0.3);
    parts.push(el("line", { x1: cx, y1: ly(s.low), x2: cx, y2: ly(s.q1), stroke: "#333" }));
    parts.push(el("line", { x1: cx, y1: ly(s.q3), x2: cx, y2: ly(s.high), stroke: "#333" }));
    for (const w of [s.low, s.high]) {
      parts.push(el("line", { x1: cx - half / 2, y1: ly(w), x2: cx + half / 2, y2: ly(w), stroke: "#333" }));
    }
    parts.push(el("rect", {
      x: cx - half, y: ly(s.q3), width: 2 * half, height: Math.max(ly(s.q1) - ly(s.q3), 0.5),
      fill: "#9ecae1", stroke: "#333",
    }));
    parts.push(el("line", {
      x1: cx - half, y1: ly(s.median), x2: cx + half, y2: ly(s.median),
      stroke: "#d62728", "stroke-width": 2,
    }));
    for (const o of s.outliers) {
      parts.push(el("circle", { cx, cy: ly(o), r: 2.5, fill: "none", stroke: "#333" }));
    }
    const label = s.dropped > 0 ? `${s.method} (+${s.dropped} non-finite)` : s.method;
    parts.push(text(cx, frame.height - frame.bottom + 16, label, { "text-anchor": "middle" }));
  });
  return document(frame, "Final error by method", parts);
}
