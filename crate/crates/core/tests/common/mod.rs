//! Slow, obviously-correct reference implementations used as test oracles.
//! None of them call into the library's own algorithms.

#![allow(dead_code)]

use pimage::{PersistenceDiagram, ScalarGrid};

/// Sorted `(birth, death)` multiset per dimension plus essential counts.
#[derive(Debug, Clone, PartialEq)]
pub struct NaiveDiagrams {
    pub finite: Vec<Vec<(f64, f64)>>,
    pub essential: Vec<usize>,
}

/// A filtered cell: dimension, value, and boundary as indices into the list.
struct NaiveCell {
    dim: usize,
    value: f64,
    key: Vec<usize>,
    boundary: Vec<usize>,
}

/// Left-to-right Z/2 column reduction of the full boundary matrix.
fn reduce(mut cells: Vec<(usize, f64, Vec<usize>)>, faces: impl Fn(&[usize]) -> Vec<Vec<usize>>, max_dim: usize) -> NaiveDiagrams {
    cells.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)).then(a.2.cmp(&b.2)));
    let index: std::collections::HashMap<Vec<usize>, usize> =
        cells.iter().enumerate().map(|(i, c)| (c.2.clone(), i)).collect();
    let list: Vec<NaiveCell> = cells
        .into_iter()
        .map(|(dim, value, key)| {
            let boundary = if dim == 0 { Vec::new() } else { faces(&key).into_iter().map(|f| index[&f]).collect() };
            NaiveCell { dim, value, key, boundary }
        })
        .collect();
    let n = list.len();
    let mut cols: Vec<Vec<bool>> = list
        .iter()
        .map(|c| {
            let mut v = vec![false; n];
            for &f in &c.boundary {
                v[f] = !v[f];
            }
            v
        })
        .collect();
    let low = |col: &Vec<bool>| col.iter().rposition(|&b| b);
    let mut low_owner: Vec<Option<usize>> = vec![None; n];
    let mut paired = vec![false; n];
    let mut finite = vec![Vec::new(); max_dim + 1];
    for j in 0..n {
        while let Some(l) = low(&cols[j]) {
            match low_owner[l] {
                Some(k) => {
                    let other = cols[k].clone();
                    for (a, b) in cols[j].iter_mut().zip(other) {
                        *a ^= b;
                    }
                }
                None => {
                    low_owner[l] = Some(j);
                    paired[l] = true;
                    paired[j] = true;
                    let d = list[l].dim;
                    if d <= max_dim && list[j].value > list[l].value {
                        finite[d].push((list[l].value, list[j].value));
                    }
                    break;
                }
            }
        }
    }
    let mut essential = vec![0; max_dim + 1];
    for (i, c) in list.iter().enumerate() {
        if !paired[i] && c.dim <= max_dim && cols[i].iter().all(|&b| !b) {
            essential[c.dim] += 1;
        }
    }
    for f in finite.iter_mut() {
        f.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    }
    NaiveDiagrams { finite, essential }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// H0 and H1 of the full Vietoris-Rips filtration (up to triangles).
pub fn naive_rips(points: &[Vec<f64>]) -> NaiveDiagrams {
    let n = points.len();
    let mut cells = Vec::new();
    for i in 0..n {
        cells.push((0, 0.0, vec![i]));
        for j in i + 1..n {
            let dij = dist(&points[i], &points[j]);
            cells.push((1, dij, vec![i, j]));
            for k in j + 1..n {
                let v = dij.max(dist(&points[i], &points[k])).max(dist(&points[j], &points[k]));
                cells.push((2, v, vec![i, j, k]));
            }
        }
    }
    reduce(
        cells,
        |s| (0..s.len()).map(|drop| s.iter().enumerate().filter(|&(k, _)| k != drop).map(|(_, &v)| v).collect()).collect(),
        1,
    )
}

/// H0 and H1 of the cubical sublevel filtration; cells keyed by their
/// sorted vertex ids.
pub fn naive_cubical(grid: &[Vec<f64>]) -> NaiveDiagrams {
    let rows = grid.len();
    let cols = grid[0].len();
    let id = |r: usize, c: usize| r * cols + c;
    let val = |v: usize| grid[v / cols][v % cols];
    let mut cells = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            cells.push((0, grid[r][c], vec![id(r, c)]));
            if c + 1 < cols {
                let e = vec![id(r, c), id(r, c + 1)];
                cells.push((1, e.iter().map(|&v| val(v)).fold(f64::NEG_INFINITY, f64::max), e));
            }
            if r + 1 < rows {
                let e = vec![id(r, c), id(r + 1, c)];
                cells.push((1, e.iter().map(|&v| val(v)).fold(f64::NEG_INFINITY, f64::max), e));
            }
            if r + 1 < rows && c + 1 < cols {
                let q = vec![id(r, c), id(r, c + 1), id(r + 1, c), id(r + 1, c + 1)];
                cells.push((2, q.iter().map(|&v| val(v)).fold(f64::NEG_INFINITY, f64::max), q));
            }
        }
    }
    reduce(
        cells,
        |s| match s.len() {
            2 => vec![vec![s[0]], vec![s[1]]],
            _ => vec![vec![s[0], s[1]], vec![s[2], s[3]], vec![s[0], s[2]], vec![s[1], s[3]]],
        },
        1,
    )
}

pub fn grid_rows(g: &ScalarGrid) -> Vec<Vec<f64>> {
    let (r, c) = g.shape();
    (0..r).map(|i| (0..c).map(|j| g.get(i, j)).collect()).collect()
}

/// True when the two sorted pair lists agree entrywise within `tol`.
pub fn pairs_match(a: &[(f64, f64)], b: &[(f64, f64)], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x.0 - y.0).abs() <= tol && (x.1 - y.1).abs() <= tol)
}

/// Every way to match some points of `a` to distinct points of `b`; the rest
/// go to the diagonal. Calls `visit` with the list of pair costs.
pub fn for_each_matching(a: &PersistenceDiagram, b: &PersistenceDiagram, mut visit: impl FnMut(&[f64])) {
    fn sup(a: (f64, f64), b: (f64, f64)) -> f64 {
        (a.0 - b.0).abs().max((a.1 - b.1).abs())
    }
    fn rec(
        i: usize,
        pa: &[(f64, f64)],
        pb: &[(f64, f64)],
        used: &mut Vec<bool>,
        costs: &mut Vec<f64>,
        visit: &mut dyn FnMut(&[f64]),
    ) {
        if i == pa.len() {
            let before = costs.len();
            for (j, q) in pb.iter().enumerate() {
                if !used[j] {
                    costs.push((q.1 - q.0) / 2.0);
                }
            }
            visit(costs);
            costs.truncate(before);
            return;
        }
        costs.push((pa[i].1 - pa[i].0) / 2.0);
        rec(i + 1, pa, pb, used, costs, visit);
        costs.pop();
        for j in 0..pb.len() {
            if !used[j] {
                used[j] = true;
                costs.push(sup(pa[i], pb[j]));
                rec(i + 1, pa, pb, used, costs, visit);
                costs.pop();
                used[j] = false;
            }
        }
    }
    let pa: Vec<_> = a.points().iter().map(|p| (p.birth(), p.death())).collect();
    let pb: Vec<_> = b.points().iter().map(|p| (p.birth(), p.death())).collect();
    rec(0, &pa, &pb, &mut vec![false; pb.len()], &mut Vec::new(), &mut visit);
}

/// `(W1, W2, bottleneck)` by exhaustive enumeration.
pub fn brute_force_distances(a: &PersistenceDiagram, b: &PersistenceDiagram) -> (f64, f64, f64) {
    let (mut w1, mut w2sq, mut wi) = (f64::INFINITY, f64::INFINITY, f64::INFINITY);
    for_each_matching(a, b, |costs| {
        w1 = w1.min(costs.iter().sum());
        w2sq = w2sq.min(costs.iter().map(|c| c * c).sum());
        wi = wi.min(costs.iter().copied().fold(0.0, f64::max));
    });
    (w1, w2sq.sqrt(), wi)
}

/// Adaptive Simpson on `[a, b]`.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// Integral of the persistence surface over `[x0, x1] x [y0, y1]` by nested
/// adaptive Simpson, summing the weighted Gaussians directly.
pub fn surface_pixel(centers: &[(f64, f64, f64)], sigma: f64, x0: f64, x1: f64, y0: f64, y1: f64, tol: f64) -> f64 {
    let norm = 1.0 / (2.0 * std::f64::consts::PI * sigma * sigma);
    let inner = |x: f64| {
        let g = |y: f64| {
            centers
                .iter()
                .map(|&(mx, my, w)| w * norm * (-((x - mx).powi(2) + (y - my).powi(2)) / (2.0 * sigma * sigma)).exp())
                .sum::<f64>()
        };
        simpson(&g, y0, y1, tol)
    };
    simpson(&inner, x0, x1, tol)
}

/// Integral of weighted 1-D Gaussians over `[x0, x1]`.
pub fn line_pixel(centers: &[(f64, f64)], sigma: f64, x0: f64, x1: f64, tol: f64) -> f64 {
    let norm = 1.0 / ((2.0 * std::f64::consts::PI).sqrt() * sigma);
    let g = |x: f64| centers.iter().map(|&(m, w)| w * norm * (-(x - m).powi(2) / (2.0 * sigma * sigma)).exp()).sum::<f64>();
    simpson(&g, x0, x1, tol)
}

/// Minimum K-medoids score over every medoid set of size `k`.
pub fn brute_force_kmedoids(n: usize, d: impl Fn(usize, usize) -> f64, k: usize) -> f64 {
    fn rec(start: usize, n: usize, k: usize, chosen: &mut Vec<usize>, d: &dyn Fn(usize, usize) -> f64, best: &mut f64) {
        if chosen.len() == k {
            let s: f64 = (0..n).map(|i| chosen.iter().map(|&m| d(i, m)).fold(f64::INFINITY, f64::min)).sum();
            *best = best.min(s);
            return;
        }
        for m in start..n {
            chosen.push(m);
            rec(m + 1, n, k, chosen, d, best);
            chosen.pop();
        }
    }
    let mut best = f64::INFINITY;
    rec(0, n, k, &mut Vec::new(), &d, &mut best);
    best
}

/// Betti numbers at `t` from a diagram list: finite points alive at `t`
/// plus essential classes born by `t`.
pub fn betti_at(diagrams: &[PersistenceDiagram], essential_births: &[Vec<f64>], t: f64) -> Vec<i64> {
    diagrams
        .iter()
        .zip(essential_births)
        .map(|(d, ess)| {
            let finite = d.points().iter().filter(|p| p.birth() <= t && t < p.death()).count();
            (finite + ess.iter().filter(|&&b| b <= t).count()) as i64
        })
        .collect()
}
