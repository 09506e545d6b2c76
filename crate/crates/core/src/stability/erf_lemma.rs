//! Closed form for the L1 distance between two weighted 1-D Gaussians.

use std::f64::consts::{FRAC_2_PI, SQRT_2};

use crate::error::{param, Result};
use crate::image::KernelSpec;

use super::quadrature;

/// `F(z) = ||a g_u - b g_v||_1` with `z = v - u`, via the error function.
///
/// `F(0) = |a - b|`; otherwise
/// `|a Erf((z^2 + 2 s^2 ln(a/b)) / (2 sqrt2 s z)) - b Erf((-z^2 + 2 s^2 ln(a/b)) / (2 sqrt2 s z))|`.
pub fn erf_lemma_f(a: f64, b: f64, sigma: f64, z: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && sigma > 0.0) || !(a.is_finite() && b.is_finite() && sigma.is_finite()) {
        return param(format!("weights and sigma must be positive, got a={a}, b={b}, sigma={sigma}"));
    }
    if !z.is_finite() {
        return param(format!("offset must be finite, got {z}"));
    }
    if z == 0.0 {
        return Ok((a - b).abs());
    }
    let log_ratio = 2.0 * sigma * sigma * (a / b).ln();
    let denom = z * sigma * 2.0 * SQRT_2;
    let p = (z * z + log_ratio) / denom;
    let q = (-z * z + log_ratio) / denom;
    Ok((a * libm::erf(p) - b * libm::erf(q)).abs())
}

/// Lipschitz bound on `F`: `|a - b| + sqrt(2/pi) min(a, b) / sigma |z|`.
pub fn erf_lemma_bound(a: f64, b: f64, sigma: f64, z: f64) -> f64 {
    (a - b).abs() + FRAC_2_PI.sqrt() * a.min(b) / sigma * z.abs()
}

/// `||a g_u - b g_v||_1` by adaptive quadrature, split at the crossing point.
///
/// `a` or `b` may be zero here.
pub fn weighted_gaussian_l1_1d(a: f64, u: f64, b: f64, v: f64, sigma: f64) -> Result<f64> {
    let k = KernelSpec::new(sigma)?;
    if !(a >= 0.0 && b >= 0.0) {
        return param("weights must be non-negative");
    }
    let lo = u.min(v) - 12.0 * sigma;
    let hi = u.max(v) + 12.0 * sigma;
    let f = |x: f64| (a * k.density_1d(u, x) - b * k.density_1d(v, x)).abs();
    let mut cuts = vec![lo, u.min(v), u.max(v), hi];
    if u != v && a > 0.0 && b > 0.0 {
        let z_star = (v * v - u * u + 2.0 * sigma * sigma * (a / b).ln()) / (2.0 * (v - u));
        if z_star > lo && z_star < hi {
            cuts.push(z_star);
        }
    }
    cuts.sort_by(f64::total_cmp);
    Ok(cuts
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| quadrature::integrate(f, w[0], w[1], 1e-13))
        .sum())
}
