use std::f64::consts::PI;

use crate::error::{param, Result};
use crate::image::{KernelSpec, TabulatedWeight, WeightingFunction};

/// `(sup f, sup |grad f|)` for an admissible weighting.
///
/// The constant weighting is rejected: it does not vanish on the birth axis,
/// so none of the stability bounds apply to it.
pub fn weighting_constants(f: &WeightingFunction) -> Result<(f64, f64)> {
    match f {
        WeightingFunction::PiecewiseLinear { b } => Ok((1.0, 1.0 / b)),
        WeightingFunction::ConstantOne => {
            param("constant weighting is not zero on the birth axis; stability bounds do not apply")
        }
        WeightingFunction::Tabulated(t) => Ok(tabulated_constants(t)),
    }
}

/// Exact sup and gradient bound of the bilinear interpolant.
///
/// On each cell the partial derivatives are affine in the other coordinate,
/// so the gradient norm peaks at a cell corner; every corner is checked using
/// the edge slopes adjacent to it.
fn tabulated_constants(t: &TabulatedWeight) -> (f64, f64) {
    let (bs, ps) = (t.births(), t.persistences());
    let mut sup = 0.0f64;
    for pi in 0..ps.len() {
        for bi in 0..bs.len() {
            sup = sup.max(t.at(bi, pi));
        }
    }
    let mut grad = 0.0f64;
    for pi in 0..ps.len() - 1 {
        let dp = ps[pi + 1] - ps[pi];
        if bs.len() == 1 {
            let gy = (t.at(0, pi + 1) - t.at(0, pi)).abs() / dp;
            grad = grad.max(gy);
            continue;
        }
        for bi in 0..bs.len() - 1 {
            let db = bs[bi + 1] - bs[bi];
            let gx = [
                (t.at(bi + 1, pi) - t.at(bi, pi)) / db,
                (t.at(bi + 1, pi + 1) - t.at(bi, pi + 1)) / db,
            ];
            let gy = [
                (t.at(bi, pi + 1) - t.at(bi, pi)) / dp,
                (t.at(bi + 1, pi + 1) - t.at(bi + 1, pi)) / dp,
            ];
            for x in gx {
                for y in gy {
                    grad = grad.max(x.hypot(y));
                }
            }
        }
    }
    (sup, grad)
}

/// `(sup g, sup |grad g|)` for the normalized 2-D Gaussian.
///
/// The gradient norm `r / sigma^2 * g(r)` peaks at `r = sigma`.
pub fn kernel_constants(kernel: &KernelSpec) -> (f64, f64) {
    let s = kernel.sigma();
    let sup = 1.0 / (2.0 * PI * s * s);
    let grad = 1.0 / (2.0 * PI * s * s * s * std::f64::consts::E.sqrt());
    (sup, grad)
}
