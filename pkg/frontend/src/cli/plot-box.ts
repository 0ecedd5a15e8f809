import { buildBoxSvg, loadTrials } from "../box.js";
import { writeFigure } from "../render.js";
import { guardedRun, runMain } from "./common.js";

const USAGE = `usage: plot-box TRIALS.csv -o OUT
  [--width 720] [--height 480] [--png-width 1440]
Writes OUT.svg and OUT.png. The trials CSV uses the harness schema
method,seed,final_error,iters,wall_ms; one box per method.`;

export function run(argv: string[]): number {
  return guardedRun(argv, (args) => {
    const stats = args.inputs.flatMap(loadTrials);
    const svg = buildBoxSvg(stats, args.frame);
    const { svgPath, pngPath } = writeFigure(svg, args.out, { pngWidth: args.pngWidth });
    console.log(`${svgPath}\n${pngPath}`);
  }, USAGE);
}

if (import.meta.url === `file://${process.argv[1]}`) {
  runMain(run);
}
