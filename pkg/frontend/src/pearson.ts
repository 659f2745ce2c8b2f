/** Product-moment correlation, independent of anything the trainer exported. */
export function pearson(x: number[], y: number[]): number {
    if (x.length !== y.length) throw new Error("length mismatch");
    if (x.length < 2) throw new Error("need at least two points");
    const n = x.length;
    let mx = 0, my = 0;
    for (let i = 0; i < n; i++) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    let sxy = 0, sxx = 0, syy = 0;
    for (let i = 0; i < n; i++) {
        const dx = x[i] - mx;
        const dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx === 0 || syy === 0) throw new Error("constant vector");
    const r = sxy / Math.sqrt(sxx * syy);
    return Math.min(1, Math.max(-1, r));
}
