//! Wasserstein and bottleneck distances between persistence diagrams.
//!
//! To match `A` (m points) with `B` (n points) both sides are padded with
//! diagonal slots, giving an `(m + n) x (m + n)` assignment problem:
//!
//! ```text
//!              B points        diagonal slots for A
//! A points     d(a_i, b_j)     diag(a_i) on i, forbidden elsewhere
//! diag for B   diag(b_j) on j  0
//! ```
//!
//! where `d` is the sup-norm distance and `diag(x)` is the sup-norm distance
//! from `x` to its diagonal projection, i.e. half its persistence.

use serde::{Deserialize, Serialize};

use crate::diagram::{DiagramPoint, PersistenceDiagram};
use crate::error::{param, Result};

use super::assignment;

/// One side of a matched pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Slot {
    Point(usize),
    Diagonal,
}

/// A bijection between two diagrams augmented with the diagonal.
///
/// Every off-diagonal point of each diagram appears in exactly one pair;
/// diagonal-to-diagonal pairs are not listed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matching {
    pub pairs: Vec<(Slot, Slot)>,
    pub cost: f64,
}

#[inline]
pub fn sup_distance(a: &DiagramPoint, b: &DiagramPoint) -> f64 {
    (a.birth() - b.birth()).abs().max((a.death() - b.death()).abs())
}

/// Sup-norm distance from a point to its projection onto the diagonal.
#[inline]
pub fn diagonal_distance(a: &DiagramPoint) -> f64 {
    0.5 * a.persistence()
}

/// Ground cost of one pair under the sup norm.
pub fn pair_cost(a: &PersistenceDiagram, b: &PersistenceDiagram, pair: (Slot, Slot)) -> f64 {
    match pair {
        (Slot::Point(i), Slot::Point(j)) => sup_distance(&a.points()[i], &b.points()[j]),
        (Slot::Point(i), Slot::Diagonal) => diagonal_distance(&a.points()[i]),
        (Slot::Diagonal, Slot::Point(j)) => diagonal_distance(&b.points()[j]),
        (Slot::Diagonal, Slot::Diagonal) => 0.0,
    }
}

/// Augmented ground-cost matrix, side `m + n`; forbidden pairs are `+inf`.
fn augmented_costs(a: &PersistenceDiagram, b: &PersistenceDiagram) -> (usize, Vec<f64>) {
    let (m, n) = (a.len(), b.len());
    let size = m + n;
    let mut cost = vec![f64::INFINITY; size * size];
    for (i, pa) in a.points().iter().enumerate() {
        for (j, pb) in b.points().iter().enumerate() {
            cost[i * size + j] = sup_distance(pa, pb);
        }
        cost[i * size + n + i] = diagonal_distance(pa);
    }
    for (j, pb) in b.points().iter().enumerate() {
        let row = m + j;
        cost[row * size + j] = diagonal_distance(pb);
        for k in 0..m {
            cost[row * size + n + k] = 0.0;
        }
    }
    (size, cost)
}

fn matching_from_assignment(m: usize, n: usize, row_to_col: &[usize]) -> Vec<(Slot, Slot)> {
    let mut pairs = Vec::with_capacity(m + n);
    for (r, &c) in row_to_col.iter().enumerate() {
        let left = if r < m { Slot::Point(r) } else { Slot::Diagonal };
        let right = if c < n { Slot::Point(c) } else { Slot::Diagonal };
        if left != Slot::Diagonal || right != Slot::Diagonal {
            pairs.push((left, right));
        }
    }
    pairs
}

/// `(sum of cost^p)^(1/p)` of a matching's pairs.
pub fn matching_cost_p(a: &PersistenceDiagram, b: &PersistenceDiagram, pairs: &[(Slot, Slot)], p: f64) -> f64 {
    let s: f64 = pairs.iter().map(|&pr| pair_cost(a, b, pr).powf(p)).sum();
    s.powf(1.0 / p)
}

/// Largest pair cost of a matching.
pub fn matching_cost_max(a: &PersistenceDiagram, b: &PersistenceDiagram, pairs: &[(Slot, Slot)]) -> f64 {
    pairs.iter().map(|&pr| pair_cost(a, b, pr)).fold(0.0, f64::max)
}

/// p-Wasserstein distance with sup-norm ground metric and an optimal matching.
///
/// `p = +inf` is accepted and delegates to [`bottleneck`].
pub fn wasserstein(a: &PersistenceDiagram, b: &PersistenceDiagram, p: f64) -> Result<(f64, Matching)> {
    if p.is_infinite() && p > 0.0 {
        return bottleneck(a, b);
    }
    if !(p >= 1.0) {
        return param(format!("Wasserstein order must be at least 1, got {p}"));
    }
    let (size, mut cost) = augmented_costs(a, b);
    if p != 1.0 {
        for c in cost.iter_mut().filter(|c| c.is_finite()) {
            *c = c.powf(p);
        }
    }
    let assignment = assignment::solve(size, &cost).expect("diagonal padding always admits a perfect assignment");
    let pairs = matching_from_assignment(a.len(), b.len(), &assignment);
    let total = matching_cost_p(a, b, &pairs, p);
    Ok((total, Matching { pairs, cost: total }))
}

/// Bottleneck distance and a matching attaining it.
///
/// Binary search over the distinct finite entries of the augmented cost
/// matrix; each probe is a bipartite perfect-matching feasibility test.
pub fn bottleneck(a: &PersistenceDiagram, b: &PersistenceDiagram) -> Result<(f64, Matching)> {
    let (size, cost) = augmented_costs(a, b);
    if size == 0 {
        return Ok((0.0, Matching { pairs: Vec::new(), cost: 0.0 }));
    }
    let mut candidates: Vec<f64> = cost.iter().copied().filter(|c| c.is_finite()).collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    let feasible = |t: f64| assignment::perfect_matching(size, |r, c| cost[r * size + c] <= t);
    // The largest candidate is always feasible; find the smallest that is.
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(candidates[mid]).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let best = feasible(candidates[lo]).expect("diagonal padding always admits a perfect matching");
    let pairs = matching_from_assignment(a.len(), b.len(), &best);
    let total = matching_cost_max(a, b, &pairs);
    Ok((total, Matching { pairs, cost: total }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(pairs: &[(f64, f64)]) -> PersistenceDiagram {
        PersistenceDiagram::from_pairs(1, pairs.iter().copied()).unwrap()
    }

    #[test]
    fn identical_diagrams_are_at_zero() {
        let a = diag(&[(0.0, 1.0), (0.5, 2.0), (0.2, 0.3)]);
        let (w1, m) = wasserstein(&a, &a, 1.0).unwrap();
        assert_eq!(w1, 0.0);
        for &(l, r) in &m.pairs {
            assert_eq!(l, r);
        }
        assert_eq!(bottleneck(&a, &a).unwrap().0, 0.0);
        assert_eq!(wasserstein(&a, &a, 2.0).unwrap().0, 0.0);
    }

    #[test]
    fn single_point_against_empty() {
        let a = diag(&[(0.0, 2.0)]);
        let e = diag(&[]);
        let (w1, m) = wasserstein(&a, &e, 1.0).unwrap();
        assert_eq!(w1, 1.0);
        assert_eq!(m.pairs, vec![(Slot::Point(0), Slot::Diagonal)]);
        assert_eq!(wasserstein(&e, &a, 1.0).unwrap().0, 1.0);
        assert_eq!(bottleneck(&a, &e).unwrap().0, 1.0);
        assert_eq!(wasserstein(&e, &e, 1.0).unwrap().0, 0.0);
        assert_eq!(bottleneck(&e, &e).unwrap().0, 0.0);
    }

    #[test]
    fn bottleneck_single_pair() {
        let a = diag(&[(0.0, 2.0)]);
        let b = diag(&[(0.0, 2.5)]);
        let (d, m) = bottleneck(&a, &b).unwrap();
        assert_eq!(d, 0.5);
        assert_eq!(m.pairs, vec![(Slot::Point(0), Slot::Point(0))]);
    }

    #[test]
    fn prefers_diagonal_when_cheaper() {
        // Two short bars far apart: matching to the diagonal costs 0.05 each.
        let a = diag(&[(0.0, 0.1)]);
        let b = diag(&[(5.0, 5.1)]);
        let (w1, m) = wasserstein(&a, &b, 1.0).unwrap();
        assert!((w1 - 0.1).abs() < 1e-15);
        assert_eq!(m.pairs.len(), 2);
        let (w2, _) = wasserstein(&a, &b, 2.0).unwrap();
        assert!((w2 - (2.0f64 * 0.05 * 0.05).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn infinite_order_is_bottleneck_and_bad_order_fails() {
        let a = diag(&[(0.0, 1.0), (0.0, 3.0)]);
        let b = diag(&[(0.0, 1.2)]);
        assert_eq!(wasserstein(&a, &b, f64::INFINITY).unwrap().0, bottleneck(&a, &b).unwrap().0);
        assert!(wasserstein(&a, &b, 0.5).is_err());
        assert!(wasserstein(&a, &b, f64::NAN).is_err());
    }

    #[test]
    fn matching_cost_is_recomputable() {
        let a = diag(&[(0.0, 1.0), (0.3, 0.9), (0.1, 0.2)]);
        let b = diag(&[(0.1, 1.1), (0.6, 0.8)]);
        let (w, m) = wasserstein(&a, &b, 2.0).unwrap();
        assert_eq!(w, m.cost);
        assert_eq!(matching_cost_p(&a, &b, &m.pairs, 2.0), w);
        let (bd, bm) = bottleneck(&a, &b).unwrap();
        assert_eq!(matching_cost_max(&a, &b, &bm.pairs), bd);
        // each off-diagonal point appears exactly once on its side
        let left: Vec<_> = m.pairs.iter().filter_map(|p| match p.0 { Slot::Point(i) => Some(i), _ => None }).collect();
        let right: Vec<_> = m.pairs.iter().filter_map(|p| match p.1 { Slot::Point(i) => Some(i), _ => None }).collect();
        let mut l = left.clone();
        l.sort();
        let mut r = right.clone();
        r.sort();
        assert_eq!(l, vec![0, 1, 2]);
        assert_eq!(r, vec![0, 1]);
    }
}
