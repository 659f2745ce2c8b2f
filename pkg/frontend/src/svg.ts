/** Minimal SVG chart builder: axes, ticks, line/point series, legend, title. */

export interface Series {
    label: string;
    x: number[];
    y: number[];
    color: string;
    kind: "line" | "points";
}

export interface ChartOptions {
    width: number;
    height: number;
    title: string;
    xLabel: string;
    yLabel: string;
    series: Series[];
    legend: boolean;
}

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd",
    "#ff7f0e", "#8c564b"];

const MARGIN = { left: 74, right: 24, top: 48, bottom: 58 };
const FONT = "DejaVu Sans, sans-serif";

export function niceTicks(lo: number, hi: number, target = 6): number[] {
    if (!(hi > lo)) {
        const pad = Math.abs(lo) > 0 ? Math.abs(lo) * 0.1 : 1;
        lo -= pad;
        hi += pad;
    }
    const rawStep = (hi - lo) / Math.max(1, target);
    const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
    let step = mag;
    for (const m of [1, 2, 2.5, 5, 10]) {
        if (m * mag >= rawStep) {
            step = m * mag;
            break;
        }
    }
    const ticks: number[] = [];
    let t = Math.ceil(lo / step) * step;
    for (; t <= hi + step * 1e-9; t += step) {
        ticks.push(Number(t.toFixed(12)));
    }
    return ticks;
}

function esc(s: string): string {
    return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function fmtTick(v: number): string {
    return String(Number(v.toPrecision(10)));
}

export function renderChart(opts: ChartOptions): string {
    const { width, height } = opts;
    const plotW = width - MARGIN.left - MARGIN.right;
    const plotH = height - MARGIN.top - MARGIN.bottom;

    const xs = opts.series.flatMap(s => s.x);
    const ys = opts.series.flatMap(s => s.y);
    let xLo = Math.min(...xs), xHi = Math.max(...xs);
    let yLo = Math.min(...ys), yHi = Math.max(...ys);
    if (xLo === xHi) { xLo -= 1; xHi += 1; }
    if (yLo === yHi) { yLo -= 1; yHi += 1; }
    const xPad = (xHi - xLo) * 0.04, yPad = (yHi - yLo) * 0.06;
    xLo -= xPad; xHi += xPad; yLo -= yPad; yHi += yPad;

    const px = (v: number) => MARGIN.left + ((v - xLo) / (xHi - xLo)) * plotW;
    const py = (v: number) => MARGIN.top + plotH - ((v - yLo) / (yHi - yLo)) * plotH;

    const parts: string[] = [];
    parts.push(`<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}">`);
    parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);

    for (const t of niceTicks(xLo + xPad, xHi - xPad)) {
        const x = px(t);
        parts.push(`<line x1="${x.toFixed(2)}" y1="${MARGIN.top}" x2="${x.toFixed(2)}" y2="${MARGIN.top + plotH}" stroke="#e0e0e0" stroke-width="1"/>`);
        parts.push(`<line x1="${x.toFixed(2)}" y1="${MARGIN.top + plotH}" x2="${x.toFixed(2)}" y2="${MARGIN.top + plotH + 5}" stroke="black"/>`);
        parts.push(`<text x="${x.toFixed(2)}" y="${MARGIN.top + plotH + 20}" font-family="${FONT}" font-size="12" text-anchor="middle">${fmtTick(t)}</text>`);
    }
    for (const t of niceTicks(yLo + yPad, yHi - yPad)) {
        const y = py(t);
        parts.push(`<line x1="${MARGIN.left}" y1="${y.toFixed(2)}" x2="${MARGIN.left + plotW}" y2="${y.toFixed(2)}" stroke="#e0e0e0" stroke-width="1"/>`);
        parts.push(`<line x1="${MARGIN.left - 5}" y1="${y.toFixed(2)}" x2="${MARGIN.left}" y2="${y.toFixed(2)}" stroke="black"/>`);
        parts.push(`<text x="${MARGIN.left - 9}" y="${(y + 4).toFixed(2)}" font-family="${FONT}" font-size="12" text-anchor="end">${fmtTick(t)}</text>`);
    }

    parts.push(`<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" fill="none" stroke="black"/>`);

    for (const s of opts.series) {
        if (s.kind === "line") {
            const pts = s.x.map((v, i) => `${px(v).toFixed(2)},${py(s.y[i]).toFixed(2)}`).join(" ");
            parts.push(`<polyline points="${pts}" fill="none" stroke="${s.color}" stroke-width="1.8"/>`);
            for (let i = 0; i < s.x.length; i++) {
                parts.push(`<circle cx="${px(s.x[i]).toFixed(2)}" cy="${py(s.y[i]).toFixed(2)}" r="2.4" fill="${s.color}"/>`);
            }
        } else {
            for (let i = 0; i < s.x.length; i++) {
                parts.push(`<circle cx="${px(s.x[i]).toFixed(2)}" cy="${py(s.y[i]).toFixed(2)}" r="1.8" fill="${s.color}" fill-opacity="0.55"/>`);
            }
        }
    }

    parts.push(`<text x="${width / 2}" y="26" font-family="${FONT}" font-size="15" text-anchor="middle">${esc(opts.title)}</text>`);
    parts.push(`<text x="${MARGIN.left + plotW / 2}" y="${height - 14}" font-family="${FONT}" font-size="13" text-anchor="middle">${esc(opts.xLabel)}</text>`);
    parts.push(`<text x="20" y="${MARGIN.top + plotH / 2}" font-family="${FONT}" font-size="13" text-anchor="middle" transform="rotate(-90 20 ${MARGIN.top + plotH / 2})">${esc(opts.yLabel)}</text>`);

    if (opts.legend && opts.series.some(s => s.label)) {
        let ly = MARGIN.top + 16;
        const lx = MARGIN.left + 12;
        for (const s of opts.series) {
            if (!s.label) continue;
            parts.push(`<line x1="${lx}" y1="${ly - 4}" x2="${lx + 20}" y2="${ly - 4}" stroke="${s.color}" stroke-width="2.5"/>`);
            parts.push(`<text x="${lx + 26}" y="${ly}" font-family="${FONT}" font-size="12" text-anchor="start">${esc(s.label)}</text>`);
            ly += 18;
        }
    }

    parts.push("</svg>");
    return parts.join("\n");
}
