import { basename } from "path";
import { writeFileSync } from "fs";
import { Resvg } from "@resvg/resvg-js";

import { readScatterCsv, readTraceCsv, TraceRow } from "./csv";
import { pearson } from "./pearson";
import { PALETTE, renderChart } from "./svg";

// 6.4 x 4.8 inches at the fixed 150 dpi
export const DPI = 150;
const WIDTH = Math.round(6.4 * DPI);
const HEIGHT = Math.round(4.8 * DPI);

export type TraceColumn = "r_word" | "r_context" | "r_sum";

export interface PlotSpec {
    inputs: string[];
    output: string;
    title?: string;
    /** trace figures: plot R^2 instead of R */
    rSquared?: boolean;
    /** trace figures: which correlation column to draw */
    column?: TraceColumn;
}

function toPng(svg: string): Buffer {
    const resvg = new Resvg(svg, {
        dpi: DPI,
        font: { loadSystemFonts: true, defaultFontFamily: "DejaVu Sans" },
    });
    return Buffer.from(resvg.render().asPng());
}

export function plotTrace(spec: PlotSpec): void {
    if (spec.inputs.length === 0) throw new Error("no input CSVs");
    const column: TraceColumn = spec.column ?? "r_word";
    const series = spec.inputs.map((path, i) => {
        const rows = readTraceCsv(path);
        const value = (row: TraceRow) =>
            spec.rSquared ? row[column] ** 2 : row[column];
        return {
            label: spec.inputs.length > 1 || spec.title === undefined
                ? basename(path).replace(/\.csv$/, "") : "",
            x: rows.map(r => r.iter),
            y: rows.map(value),
            color: PALETTE[i % PALETTE.length],
            kind: "line" as const,
        };
    });
    const yLabel = spec.rSquared ? `${column} R^2` : `${column} R`;
    const svg = renderChart({
        width: WIDTH, height: HEIGHT,
        title: spec.title ?? `${yLabel} by iteration`,
        xLabel: "iteration", yLabel,
        series, legend: true,
    });
    writeFileSync(spec.output, toPng(svg));
}

export function plotScatter(spec: PlotSpec): { r: number } {
    if (spec.inputs.length !== 1) {
        throw new Error("scatter takes exactly one input CSV");
    }
    const rows = readScatterCsv(spec.inputs[0]);
    const r = pearson(rows.map(p => p.bias), rows.map(p => p.log_count));
    const title = `${spec.title ?? basename(spec.inputs[0]).replace(/\.csv$/, "")}  R=${r.toFixed(3)}`;
    const svg = renderChart({
        width: WIDTH, height: HEIGHT,
        title,
        xLabel: "log count", yLabel: "word bias",
        series: [{
            label: "",
            x: rows.map(p => p.log_count),
            y: rows.map(p => p.bias),
            color: PALETTE[0],
            kind: "points",
        }],
        legend: false,
    });
    writeFileSync(spec.output, toPng(svg));
    return { r };
}
