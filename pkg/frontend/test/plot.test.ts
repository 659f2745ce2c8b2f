import { mkdtempSync, readFileSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { describe, expect, it } from "vitest";

import { readScatterCsv, readTraceCsv, CsvError } from "../src/csv";
import { pearson } from "../src/pearson";
import { plotScatter, plotTrace } from "../src/plot";
import { run } from "../src/cli";
import { niceTicks } from "../src/svg";

const FIXTURES = join(__dirname, "fixtures");
const TRACE10 = join(FIXTURES, "trace_xmax10.csv");
const TRACE100 = join(FIXTURES, "trace_xmax100.csv");
const SCATTER = join(FIXTURES, "scatter_xmax10_iter8.csv");

function tmp(): string {
    return mkdtempSync(join(tmpdir(), "covec-plot-"));
}

function pngSize(buf: Buffer): { width: number; height: number } {
    // IHDR starts at byte 16: width/height as big-endian u32
    return { width: buf.readUInt32BE(16), height: buf.readUInt32BE(20) };
}

describe("csv", () => {
    it("parses the trace header and records", () => {
        const rows = readTraceCsv(TRACE10);
        expect(rows.length).toBe(8);
        expect(rows[0].iter).toBe(1);
        expect(rows[7].r_word).toBeGreaterThan(rows[0].r_word);
    });

    it("parses scatter rows", () => {
        const rows = readScatterCsv(SCATTER);
        expect(rows.length).toBe(12);
        expect(rows[0].token).toBe("t0");
        expect(Math.exp(rows[0].log_count)).toBeCloseTo(rows[0].count, 9);
    });

    it("names the missing column", () => {
        const dir = tmp();
        const bad = join(dir, "bad.csv");
        writeFileSync(bad, "iter,r_word,r_sum\n1,0.5,0.5\n");
        expect(() => readTraceCsv(bad)).toThrow(/r_context/);
    });

    it("rejects a header-only file", () => {
        const dir = tmp();
        const empty = join(dir, "empty.csv");
        writeFileSync(empty, "iter,r_word,r_context,r_sum\n");
        expect(() => readTraceCsv(empty)).toThrow(CsvError);
    });
});

describe("pearson", () => {
    it("matches a worked value", () => {
        expect(pearson([1, 2, 3], [1, 2, 4])).toBeCloseTo(0.9819805060619659, 12);
    });

    it("is exactly one for identical inputs", () => {
        expect(pearson([0.5, 1.25, -3], [0.5, 1.25, -3])).toBe(1);
    });

    it("rejects constant input", () => {
        expect(() => pearson([1, 1], [2, 3])).toThrow();
    });
});

describe("niceTicks", () => {
    it("covers the range with round steps", () => {
        const ticks = niceTicks(0, 50);
        expect(ticks[0]).toBe(0);
        expect(ticks[ticks.length - 1]).toBe(50);
        expect(ticks.length).toBeGreaterThan(3);
    });
});

describe("plotTrace", () => {
    it("renders one curve per input file", () => {
        const out = join(tmp(), "trace.png");
        plotTrace({ inputs: [TRACE10, TRACE100], output: out });
        const buf = readFileSync(out);
        expect(buf.subarray(1, 4).toString()).toBe("PNG");
        expect(pngSize(buf)).toEqual({ width: 960, height: 720 });
    });

    it("supports the R-squared variant", () => {
        const out1 = join(tmp(), "r.png");
        const out2 = join(tmp(), "r2.png");
        plotTrace({ inputs: [TRACE10], output: out1 });
        plotTrace({ inputs: [TRACE10], output: out2, rSquared: true });
        expect(readFileSync(out1).equals(readFileSync(out2))).toBe(false);
    });

    it("is deterministic", () => {
        const a = join(tmp(), "a.png");
        const b = join(tmp(), "b.png");
        plotTrace({ inputs: [TRACE10, TRACE100], output: a });
        plotTrace({ inputs: [TRACE10, TRACE100], output: b });
        expect(readFileSync(a).equals(readFileSync(b))).toBe(true);
    });
});

describe("plotScatter", () => {
    it("annotates R that matches an independent recomputation", () => {
        const out = join(tmp(), "scatter.png");
        const { r } = plotScatter({ inputs: [SCATTER], output: out });
        const rows = readScatterCsv(SCATTER);
        const check = pearson(rows.map(p => p.bias), rows.map(p => p.log_count));
        expect(Math.abs(r - check)).toBeLessThan(1e-9);
        expect(readFileSync(out).subarray(1, 4).toString()).toBe("PNG");
    });

    it("matches the final trace record within 1e-9", () => {
        // the scatter was exported at iteration 8 of the same run
        const { r } = plotScatter({
            inputs: [SCATTER],
            output: join(tmp(), "s.png"),
        });
        const trace = readTraceCsv(TRACE10);
        expect(Math.abs(r - trace[trace.length - 1].r_word)).toBeLessThan(1e-9);
    });

    it("annotates R=1.000 when bias equals log count", () => {
        const dir = tmp();
        const csv = join(dir, "perfect.csv");
        const lines = ["token,count,log_count,bias"];
        for (let i = 1; i <= 5; i++) {
            const c = i * 10;
            lines.push(`w${i},${c},${Math.log(c)},${Math.log(c)}`);
        }
        writeFileSync(csv, lines.join("\n") + "\n");
        const { r } = plotScatter({ inputs: [csv], output: join(dir, "p.png") });
        expect(r.toFixed(3)).toBe("1.000");
    });
});

describe("cli", () => {
    it("runs the trace subcommand", () => {
        const out = join(tmp(), "fig.png");
        const rc = run(["trace", "--in", TRACE10, "--in", TRACE100,
            "--out", out, "--r-squared"]);
        expect(rc).toBe(0);
        expect(readFileSync(out).length).toBeGreaterThan(0);
    });

    it("runs the scatter subcommand", () => {
        const out = join(tmp(), "fig.png");
        expect(run(["scatter", "--in", SCATTER, "--out", out])).toBe(0);
    });

    it("returns 1 on usage errors", () => {
        expect(run([])).toBe(1);
        expect(run(["trace", "--bogus"])).toBe(1);
        expect(run(["trace", "--in", TRACE10])).toBe(1);
    });

    it("returns 2 on data errors", () => {
        const out = join(tmp(), "fig.png");
        expect(run(["trace", "--in", "/nonexistent.csv", "--out", out])).toBe(2);
        const dir = tmp();
        const empty = join(dir, "empty.csv");
        writeFileSync(empty, "iter,r_word,r_context,r_sum\n");
        expect(run(["trace", "--in", empty, "--out", out])).toBe(2);
    });
});
