import { loadDemo, buildSmoothingSvg } from "../smoothing.js";
import { writeFigure } from "../render.js";
import { guardedRun, runMain } from "./common.js";

const USAGE = `usage: plot-smoothing DEMO.csv -o OUT
  [--width 720] [--height 640] [--png-width 1440]
Writes OUT.svg and OUT.png. The demo CSV uses the schema tau,t,g,dg
(robustreg demo-smoothing output); one curve per tau in each panel.`;

export function run(argv: string[]): number {
  return guardedRun(argv, (args) => {
    const curves = args.inputs.flatMap(loadDemo);
    const frame = args.frame.height === 480 ? { ...args.frame, height: 640 } : args.frame;
    const svg = buildSmoothingSvg(curves, frame);
    const { svgPath, pngPath } = writeFigure(svg, args.out, { pngWidth: args.pngWidth });
    console.log(`${svgPath}\n${pngPath}`);
  }, USAGE);
}

if (import.meta.url === `file://${process.argv[1]}`) {
  runMain(run);
}
