/** Convergence figure: log10 error (or objective) per iteration, one
 * curve per method, phase-switch iterations marked. */

import { basename } from "node:path";
import { numericColumn, readTable } from "./csv.js";
import { Frame, DEFAULT_FRAME, PALETTE, axes, document, el, legend, polyline, text } from "./svg.js";

export const TRACE_COLUMNS = ["iter", "phase", "stepsize", "objective", "rel_error"];

export interface TraceSeries {
  name: string;
  iters: number[];
  /** log10 of rel_error, or of objective in the degraded mode */
  logValues: number[];
  switchIter: number | null;
  usesObjective: boolean;
}

export function loadTrace(path: string): TraceSeries {
  const table = readTable(path, TRACE_COLUMNS);
  const iters = numericColumn(table, "iter", path);
  const phases = numericColumn(table, "phase", path);
  const relErrors = numericColumn(table, "rel_error", path);
  const objectives = numericColumn(table, "objective", path);

  // degraded mode: instances without ground truth leave rel_error empty
  const usesObjective = relErrors.every((v) => Number.isNaN(v));
  const raw = usesObjective ? objectives : relErrors;

  const keptIters: number[] = [];
  const logValues: number[] = [];
  for (let i = 0; i < iters.length; i++) {
    if (Number.isFinite(raw[i]) && raw[i] > 0) {
      keptIters.push(iters[i]);
      logValues.push(Math.log10(raw[i]));
    }
  }
  const switchIdx = phases.findIndex((p) => p === 2);
  return {
    name: basename(path).replace(/^trace_/, "").replace(/\.csv$/, ""),
    iters: keptIters,
    logValues,
    switchIter: switchIdx >= 0 ? iters[switchIdx] : null,
    usesObjective,
  };
}

export function buildConvergenceSvg(series: TraceSeries[], frame: Frame = DEFAULT_FRAME): string {
  if (series.length === 0) throw new Error("no trace series given");
  const usesObjective = series.some((s) => s.usesObjective);
  const xs = series.flatMap((s) => s.iters);
  const ys = series.flatMap((s) => s.logValues);
  const xDomain: [number, number] = [0, Math.max(...xs, 1)];
  const yLo = Math.floor(Math.min(...ys));
  const yHi = Math.ceil(Math.max(...ys));
  const yDomain: [number, number] = [yLo, yHi === yLo ? yLo + 1 : yHi];
  const yLabel = usesObjective
    ? "log10 objective (no ground truth in trace)"
    : "log10 relative error";

  const ax = axes(frame, xDomain, yDomain, "iteration", yLabel);
  const parts = [...ax.parts];
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const points = s.iters.map((it, j): [number, number] => [ax.x(it), ax.y(s.logValues[j])]);
    parts.push(polyline(points, color));
    if (s.switchIter !== null) {
      const px = ax.x(s.switchIter);
      parts.push(el("line", {
        x1: px, y1: ax.y.range[1], x2: px, y2: ax.y.range[0],
        stroke: color, "stroke-dasharray": "4 3", "stroke-width": 1,
      }));
      parts.push(text(px + 3, ax.y.range[1] + 12, `switch@${s.switchIter}`, {
        fill: color, "font-size": 9,
      }));
    }
  });
  parts.push(...legend(frame, series.map((s, i) => [s.name, PALETTE[i % PALETTE.length]])));
  return document(frame, "Convergence", parts);
}
