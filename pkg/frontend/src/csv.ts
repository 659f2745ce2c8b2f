import { readFileSync } from "fs";

export interface TraceRow {
    iter: number;
    r_word: number;
    r_context: number;
    r_sum: number;
}

export interface ScatterRow {
    token: string;
    count: number;
    log_count: number;
    bias: number;
}

export const TRACE_COLUMNS = ["iter", "r_word", "r_context", "r_sum"] as const;
export const SCATTER_COLUMNS = ["token", "count", "log_count", "bias"] as const;

export class CsvError extends Error {}

function splitLines(text: string): string[] {
    const lines = text.split("\n");
    if (lines.length && lines[lines.length - 1] === "") lines.pop();
    return lines;
}

function headerIndex(header: string, required: readonly string[], path: string): Map<string, number> {
    const names = header.split(",");
    const index = new Map<string, number>();
    names.forEach((name, i) => index.set(name, i));
    for (const column of required) {
        if (!index.has(column)) {
            throw new CsvError(`${path}: missing column '${column}'`);
        }
    }
    return index;
}

export function readTraceCsv(path: string): TraceRow[] {
    const lines = splitLines(readFileSync(path, "utf-8"));
    if (lines.length === 0) throw new CsvError(`${path}: empty file`);
    const index = headerIndex(lines[0], TRACE_COLUMNS, path);
    const rows: TraceRow[] = [];
    for (let i = 1; i < lines.length; i++) {
        const parts = lines[i].split(",");
        rows.push({
            iter: Number(parts[index.get("iter")!]),
            r_word: Number(parts[index.get("r_word")!]),
            r_context: Number(parts[index.get("r_context")!]),
            r_sum: Number(parts[index.get("r_sum")!]),
        });
    }
    if (rows.length === 0) throw new CsvError(`${path}: no records`);
    return rows;
}

export function readScatterCsv(path: string): ScatterRow[] {
    const lines = splitLines(readFileSync(path, "utf-8"));
    if (lines.length === 0) throw new CsvError(`${path}: empty file`);
    const index = headerIndex(lines[0], SCATTER_COLUMNS, path);
    const rows: ScatterRow[] = [];
    for (let i = 1; i < lines.length; i++) {
        const parts = lines[i].split(",");
        rows.push({
            token: parts[index.get("token")!],
            count: Number(parts[index.get("count")!]),
            log_count: Number(parts[index.get("log_count")!]),
            bias: Number(parts[index.get("bias")!]),
        });
    }
    if (rows.length === 0) throw new CsvError(`${path}: no records`);
    return rows;
}
