#!/usr/bin/env node
/**
 * covec-plot trace   --in trace_xmax10.csv [--in trace_xmax100.csv ...]
 *                    --out fig.png [--column r_word] [--r-squared] [--title T]
 * covec-plot scatter --in scatter.csv --out fig.png [--title T]
 *
 * Exit codes: 0 ok, 1 usage error, 2 data error.
 */
import { CsvError } from "./csv";
import { plotScatter, plotTrace, PlotSpec, TraceColumn } from "./plot";

const USAGE = "usage: covec-plot <trace|scatter> --in FILE [--in FILE ...] " +
    "--out FILE [--column r_word|r_context|r_sum] [--r-squared] [--title T]";

export function parseArgs(argv: string[]): { kind: string; spec: PlotSpec } {
    const kind = argv[0];
    if (kind !== "trace" && kind !== "scatter") {
        throw new UsageError(`unknown or missing subcommand '${kind ?? ""}'`);
    }
    const spec: PlotSpec = { inputs: [], output: "" };
    for (let i = 1; i < argv.length; i++) {
        const flag = argv[i];
        const next = () => {
            if (i + 1 >= argv.length) throw new UsageError(`${flag} needs a value`);
            return argv[++i];
        };
        switch (flag) {
            case "--in": spec.inputs.push(next()); break;
            case "--out": spec.output = next(); break;
            case "--title": spec.title = next(); break;
            case "--column": spec.column = next() as TraceColumn; break;
            case "--r-squared": spec.rSquared = true; break;
            default: throw new UsageError(`unknown flag '${flag}'`);
        }
    }
    if (spec.inputs.length === 0) throw new UsageError("--in is required");
    if (!spec.output) throw new UsageError("--out is required");
    if (spec.column && !["r_word", "r_context", "r_sum"].includes(spec.column)) {
        throw new UsageError(`bad --column '${spec.column}'`);
    }
    return { kind, spec };
}

export class UsageError extends Error {}

export function run(argv: string[]): number {
    let parsed;
    try {
        parsed = parseArgs(argv);
    } catch (err) {
        if (err instanceof UsageError) {
            console.error(`usage error: ${err.message}\n${USAGE}`);
            return 1;
        }
        throw err;
    }
    try {
        if (parsed.kind === "trace") {
            plotTrace(parsed.spec);
        } else {
            const { r } = plotScatter(parsed.spec);
            console.log(`R=${r.toFixed(6)}`);
        }
        console.log(`wrote ${parsed.spec.output}`);
        return 0;
    } catch (err) {
        if (err instanceof CsvError || (err as NodeJS.ErrnoException).code === "ENOENT") {
            console.error(`error: ${(err as Error).message}`);
            return 2;
        }
        throw err;
    }
}

if (require.main === module) {
    process.exit(run(process.argv.slice(2)));
}
