/** Output writing: every figure is saved as both SVG and PNG. */

import { writeFileSync } from "node:fs";
import { Resvg } from "@resvg/resvg-js";

export interface RenderOptions {
  /** raster width in pixels; defaults to 2x the SVG width */
  pngWidth?: number;
}

/** Strip a trailing .svg/.png so `-o fig.png` and `-o fig` both work. */
export function outputBase(out: string): string {
  return out.replace(/\.(svg|png)$/i, "");
}

export function writeFigure(svg: string, out: string, options: RenderOptions = {}): { svgPath: string; pngPath: string } {
  const base = outputBase(out);
  const svgPath = `${base}.svg`;
  const pngPath = `${base}.png`;
  writeFileSync(svgPath, svg, "utf-8");
  const match = svg.match(/width="(\d+)"/);
  const width = options.pngWidth ?? (match ? 2 * Number(match[1]) : 1440);
  const resvg = new Resvg(svg, { fitTo: { mode: "width", value: width } });
  writeFileSync(pngPath, resvg.render().asPng());
  return { svgPath, pngPath };
}
