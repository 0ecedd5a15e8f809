/** Shared flag handling for the plot scripts.
 *
 * Usage pattern: <script> INPUT.csv [...more.csv] -o OUT [--width 720]
 * [--height 480] [--png-width 1440]. Output lands at OUT.svg and
 * OUT.png. Exit codes: 0 success, 1 bad input or schema mismatch,
 * 2 usage error.
 */

import { DEFAULT_FRAME, Frame } from "../svg.js";

export interface CliArgs {
  inputs: string[];
  out: string;
  frame: Frame;
  pngWidth?: number;
}

export function parseArgs(argv: string[], usage: string): CliArgs {
  const inputs: string[] = [];
  let out: string | null = null;
  let width = DEFAULT_FRAME.width;
  let height = DEFAULT_FRAME.height;
  let pngWidth: number | undefined;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    const next = () => {
      i += 1;
      if (i >= argv.length) throw new UsageError(`missing value for ${arg}\n${usage}`);
      return argv[i];
    };
    if (arg === "-o" || arg === "--out") out = next();
    else if (arg === "--width") width = Number(next());
    else if (arg === "--height") height = Number(next());
    else if (arg === "--png-width") pngWidth = Number(next());
    else if (arg === "-h" || arg === "--help") throw new UsageError(usage);
    else if (arg.startsWith("-")) throw new UsageError(`unknown flag ${arg}\n${usage}`);
    else inputs.push(arg);
  }
  if (!out || inputs.length === 0 || !Number.isFinite(width) || !Number.isFinite(height)) {
    throw new UsageError(usage);
  }
  return {
    inputs,
    out,
    frame: { ...DEFAULT_FRAME, width, height },
    pngWidth,
  };
}

export class UsageError extends Error {}

export function runMain(run: (argv: string[]) => number): void {
  try {
    process.exit(run(process.argv.slice(2)));
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(err.message);
      process.exit(2);
    }
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    process.exit(1);
  }
}

export function guardedRun(argv: string[], body: (args: CliArgs) => void, usage: string): number {
  let args: CliArgs;
  try {
    args = parseArgs(argv, usage);
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(err.message);
      return 2;
    }
    throw err;
  }
  try {
    body(args);
    return 0;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
}
