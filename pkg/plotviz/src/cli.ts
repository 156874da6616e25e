#!/usr/bin/env node
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";
import { readTrajectory, SchemaError } from "./csv.js";
import { plotComparison } from "./plot.js";
import { writePng } from "./png.js";

const USAGE =
  "usage: plot --ne <csv> --woolsey <csv> --out <png> [--window t0 t1]";

export function main(argv: string[]): number {
  let values: { ne?: string; woolsey?: string; out?: string;
                window?: string; help?: boolean };
  let positionals: string[];
  try {
    ({ values, positionals } = parseArgs({
      args: argv,
      options: {
        ne: { type: "string" },
        woolsey: { type: "string" },
        out: { type: "string" },
        window: { type: "string" },
        help: { type: "boolean", short: "h" },
      },
      allowPositionals: true,
    }));
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    console.error(USAGE);
    return 2;
  }
  if (values.help) {
    console.log(USAGE);
    return 0;
  }
  if (!values.ne || !values.woolsey || !values.out) {
    console.error("error: --ne, --woolsey, and --out are required");
    console.error(USAGE);
    return 2;
  }

  // --window consumes its first value as the option and the second as a
  // positional, matching the documented "--window t0 t1" form
  let window: [number, number] | undefined;
  if (values.window !== undefined) {
    if (positionals.length !== 1) {
      console.error("error: --window needs exactly two values: t0 t1");
      return 2;
    }
    const t0 = Number(values.window);
    const t1 = Number(positionals[0]);
    if (!Number.isFinite(t0) || !Number.isFinite(t1) || !(t0 < t1)) {
      console.error(
        `error: bad window [${values.window}, ${positionals[0]}]; ` +
        "need finite t0 < t1");
      return 2;
    }
    window = [t0, t1];
  } else if (positionals.length > 0) {
    console.error(`error: unexpected argument "${positionals[0]}"`);
    console.error(USAGE);
    return 2;
  }

  try {
    const ne = readTrajectory(values.ne);
    const woolsey = readTrajectory(values.woolsey);
    writePng(plotComparison(ne, woolsey, window), values.out);
    console.log(`wrote ${values.out}`);
    return 0;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return err instanceof SchemaError ? 2 : 1;
  }
}

if (process.argv[1]
    && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
