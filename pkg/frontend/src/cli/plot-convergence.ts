import { buildConvergenceSvg, loadTrace } from "../convergence.js";
import { writeFigure } from "../render.js";
import { guardedRun, runMain } from "./common.js";

const USAGE = `usage: plot-convergence TRACE.csv [...TRACE.csv] -o OUT
  [--width 720] [--height 480] [--png-width 1440]
Writes OUT.svg and OUT.png. Trace CSVs use the harness schema
iter,phase,stepsize,objective,rel_error; an empty rel_error column
falls back to plotting the objective.`;

export function run(argv: string[]): number {
  return guardedRun(argv, (args) => {
    const series = args.inputs.map(loadTrace);
    const svg = buildConvergenceSvg(series, args.frame);
    const { svgPath, pngPath } = writeFigure(svg, args.out, { pngWidth: args.pngWidth });
    console.log(`${svgPath}\n${pngPath}`);
  }, USAGE);
}

if (import.meta.url === `file://${process.argv[1]}`) {
  runMain(run);
}
