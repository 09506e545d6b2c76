use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{param, Result};

/// Normalized symmetric Gaussian with standard deviation `sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    sigma: f64,
}

impl KernelSpec {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return param(format!("sigma must be positive and finite, got {sigma}"));
        }
        Ok(Self { sigma })
    }

    #[inline]
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// 2-D density centered at `(mx, my)` evaluated at `(x, y)`.
    #[inline]
    pub fn density(&self, mx: f64, my: f64, x: f64, y: f64) -> f64 {
        let s2 = self.sigma * self.sigma;
        let r2 = (x - mx) * (x - mx) + (y - my) * (y - my);
        (-r2 / (2.0 * s2)).exp() / (2.0 * PI * s2)
    }

    /// 1-D density centered at `m` evaluated at `x`.
    #[inline]
    pub fn density_1d(&self, m: f64, x: f64) -> f64 {
        let z = (x - m) / self.sigma;
        (-0.5 * z * z).exp() / (self.sigma * (2.0 * PI).sqrt())
    }

    /// Mass of the 1-D density centered at `m` on `[lo, hi]`.
    #[inline]
    pub fn interval_mass(&self, m: f64, lo: f64, hi: f64) -> f64 {
        normal_interval((lo - m) / self.sigma, (hi - m) / self.sigma)
    }
}

/// `Phi(b) - Phi(a)` for the standard normal, accurate in both tails.
pub(crate) fn normal_interval(a: f64, b: f64) -> f64 {
    if a >= 0.0 {
        0.5 * (libm::erfc(a * FRAC_1_SQRT_2) - libm::erfc(b * FRAC_1_SQRT_2))
    } else if b <= 0.0 {
        0.5 * (libm::erfc(-b * FRAC_1_SQRT_2) - libm::erfc(-a * FRAC_1_SQRT_2))
    } else {
        0.5 * (libm::erf(b * FRAC_1_SQRT_2) - libm::erf(a * FRAC_1_SQRT_2))
    }
}
