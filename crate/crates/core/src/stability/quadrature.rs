//! Adaptive quadrature used to estimate L1 norms of Gaussian mixtures.

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (positive half; node 0 last).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the odd Kronrod nodes (1, 3, 5) and the center.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for k in 0..7 {
        let x = h * XGK[k];
        let s = f(c - x) + f(c + x);
        kronrod += WGK[k] * s;
        if k % 2 == 1 {
            gauss += WG[k / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive Gauss-Kronrod integral of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (v, err) = gk15(f, a, b);
        if err <= tol || depth == 0 {
            return v;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, 0.5 * tol, depth - 1) + rec(f, m, b, 0.5 * tol, depth - 1)
    }
    rec(&f, a, b, tol, 48)
}

// 5-point Gauss-Legendre on [-1, 1].
const GL5_X: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GL5_W: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

fn gl5x5<F: Fn(f64, f64) -> f64>(f: &F, x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
    let (cx, hx) = (0.5 * (x0 + x1), 0.5 * (x1 - x0));
    let (cy, hy) = (0.5 * (y0 + y1), 0.5 * (y1 - y0));
    let mut s = 0.0;
    for i in 0..5 {
        let x = cx + hx * GL5_X[i];
        let mut row = 0.0;
        for j in 0..5 {
            row += GL5_W[j] * f(x, cy + hy * GL5_X[j]);
        }
        s += GL5_W[i] * row;
    }
    s * hx * hy
}

/// Adaptive 2-D cubature over `[x0, x1] x [y0, y1]`.
///
/// The box is first split into `cells x cells` tiles; each tile is refined by
/// quadrisection until a 5x5 Gauss-Legendre estimate agrees with the sum over
/// its four children to within the tile's share of `tol`.
pub fn integrate_2d<F: Fn(f64, f64) -> f64>(f: F, x0: f64, x1: f64, y0: f64, y1: f64, cells: usize, tol: f64) -> f64 {
    fn rec<F: Fn(f64, f64) -> f64>(f: &F, x0: f64, x1: f64, y0: f64, y1: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let (xm, ym) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
        let parts = [
            gl5x5(f, x0, xm, y0, ym),
            gl5x5(f, xm, x1, y0, ym),
            gl5x5(f, x0, xm, ym, y1),
            gl5x5(f, xm, x1, ym, y1),
        ];
        let refined: f64 = parts.iter().sum();
        if (refined - whole).abs() <= tol || depth == 0 {
            return refined;
        }
        let t = 0.25 * tol;
        rec(f, x0, xm, y0, ym, parts[0], t, depth - 1)
            + rec(f, xm, x1, y0, ym, parts[1], t, depth - 1)
            + rec(f, x0, xm, ym, y1, parts[2], t, depth - 1)
            + rec(f, xm, x1, ym, y1, parts[3], t, depth - 1)
    }
    let cells = cells.max(1);
    let hx = (x1 - x0) / cells as f64;
    let hy = (y1 - y0) / cells as f64;
    let t = tol / (cells * cells) as f64;
    let mut total = 0.0;
    for i in 0..cells {
        let (a, b) = (x0 + hx * i as f64, if i + 1 == cells { x1 } else { x0 + hx * (i + 1) as f64 });
        for j in 0..cells {
            let (c, d) = (y0 + hy * j as f64, if j + 1 == cells { y1 } else { y0 + hy * (j + 1) as f64 });
            let whole = gl5x5(&f, a, b, c, d);
            total += rec(&f, a, b, c, d, whole, t, 10);
        }
    }
    total
}
