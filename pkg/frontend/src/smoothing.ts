/** Smoothing-demo figure: the averaged absolute deviation g(t) and its
 * subdifferential, one curve per noise scale, two stacked panels. */

import { numericColumn, readTable } from "./csv.js";
import { Frame, DEFAULT_FRAME, PALETTE, axes, document, legend, polyline } from "./svg.js";

export const DEMO_COLUMNS = ["tau", "t", "g", "dg"];

export interface SmoothingCurve {
  tau: number;
  t: number[];
  g: number[];
  dg: number[];
}

export function loadDemo(path: string): SmoothingCurve[] {
  const table = readTable(path, DEMO_COLUMNS);
  const taus = numericColumn(table, "tau", path);
  const t = numericColumn(table, "t", path);
  const g = numericColumn(table, "g", path);
  const dg = numericColumn(table, "dg", path);
  const byTau = new Map<number, SmoothingCurve>();
  taus.forEach((tau, i) => {
    if (!byTau.has(tau)) byTau.set(tau, { tau, t: [], g: [], dg: [] });
    const curve = byTau.get(tau)!;
    curve.t.push(t[i]);
    curve.g.push(g[i]);
    curve.dg.push(dg[i]);
  });
  return [...byTau.values()].sort((a, b) => a.tau - b.tau);
}

export function buildSmoothingSvg(curves: SmoothingCurve[], frame?: Frame): string {
  if (curves.length === 0) throw new Error("no smoothing curves given");
  const f: Frame = frame ?? { ...DEFAULT_FRAME, height: 640 };
  const gap = 46;
  const panelHeight = (f.height - f.top - f.bottom - gap) / 2;
  const allT = curves.flatMap((c) => c.t);
  const xDomain: [number, number] = [Math.min(...allT), Math.max(...allT)];
  const allG = curves.flatMap((c) => c.g);
  const topAxes = axes(f, xDomain, [0, Math.max(...allG) * 1.05],
    "", "mean |noise - t|", undefined, 0, panelHeight);
  const botAxes = axes(f, xDomain, [-1.05, 1.05],
    "t", "mean sign(t - noise)", undefined, panelHeight + gap, panelHeight);

  const parts = [...topAxes.parts, ...botAxes.parts];
  curves.forEach((curve, i) => {
    const color = PALETTE[i % PALETTE.length];
    parts.push(polyline(curve.t.map((tv, j): [number, number] =>
      [topAxes.x(tv), topAxes.y(curve.g[j])]), color));
    parts.push(polyline(curve.t.map((tv, j): [number, number] =>
      [botAxes.x(tv), botAxes.y(curve.dg[j])]), color));
  });
  parts.push(...legend(f, curves.map((c, i) =>
    [`tau=${c.tau}`, PALETTE[i % PALETTE.length]])));
  return document(f, "Noise smoothing of the absolute loss", parts);
}
