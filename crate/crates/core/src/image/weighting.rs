use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};

/// Piecewise-linear ramp: 0 for `t <= 0`, `t / b` on `(0, b)`, 1 for `t >= b`.
pub fn weight_wb(b: f64, persistence: f64) -> Result<f64> {
    if !(b > 0.0) || !b.is_finite() {
        return param(format!("weight ceiling b must be positive and finite, got {b}"));
    }
    Ok(ramp(b, persistence))
}

#[inline]
pub(crate) fn ramp(b: f64, t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t < b {
        t / b
    } else {
        1.0
    }
}

/// Bilinearly interpolated weight table over (birth, persistence).
///
/// The first persistence sample must be 0 and its row must be all zeros, so
/// the weight vanishes on the birth axis. Queries outside the table clamp to
/// the nearest edge, except that non-positive persistence is always 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabulatedWeight {
    births: Vec<f64>,
    persistences: Vec<f64>,
    /// `values[p * births.len() + b]`
    values: Vec<f64>,
}

impl TabulatedWeight {
    pub fn new(births: Vec<f64>, persistences: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if births.is_empty() || persistences.len() < 2 {
            return param("weight table needs at least one birth and two persistence samples");
        }
        let increasing = |v: &[f64]| v.windows(2).all(|w| w[0] < w[1]);
        if !increasing(&births) || !increasing(&persistences) {
            return param("weight table axes must be strictly increasing");
        }
        if values.len() != births.len() * persistences.len() {
            return param(format!(
                "weight table needs {} values, got {}",
                births.len() * persistences.len(),
                values.len()
            ));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return param("weight table values must be finite and non-negative");
        }
        if persistences[0] != 0.0 || values[..births.len()].iter().any(|v| *v != 0.0) {
            return param("weight table must start at persistence 0 with zero weights");
        }
        Ok(Self {
            births,
            persistences,
            values,
        })
    }

    /// Samples `f(birth, persistence)` on the given axes.
    pub fn sample<F>(births: Vec<f64>, persistences: Vec<f64>, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64,
    {
        let mut values = Vec::with_capacity(births.len() * persistences.len());
        for &p in &persistences {
            for &b in &births {
                values.push(f(b, p));
            }
        }
        Self::new(births, persistences, values)
    }

    pub fn births(&self) -> &[f64] {
        &self.births
    }

    pub fn persistences(&self) -> &[f64] {
        &self.persistences
    }

    #[inline]
    pub fn at(&self, bi: usize, pi: usize) -> f64 {
        self.values[pi * self.births.len() + bi]
    }

    pub fn eval(&self, birth: f64, persistence: f64) -> f64 {
        if persistence <= 0.0 {
            return 0.0;
        }
        let (b0, b1, tb) = bracket(&self.births, birth);
        let (p0, p1, tp) = bracket(&self.persistences, persistence);
        let lo = self.at(b0, p0) * (1.0 - tb) + self.at(b1, p0) * tb;
        let hi = self.at(b0, p1) * (1.0 - tb) + self.at(b1, p1) * tb;
        lo * (1.0 - tp) + hi * tp
    }
}

/// Index pair and interpolation fraction for `x` on a sorted axis, clamped.
fn bracket(axis: &[f64], x: f64) -> (usize, usize, f64) {
    let n = axis.len();
    if n == 1 || x <= axis[0] {
        return (0, 0, 0.0);
    }
    if x >= axis[n - 1] {
        return (n - 1, n - 1, 0.0);
    }
    let hi = axis.partition_point(|&a| a <= x);
    let lo = hi - 1;
    let t = (x - axis[lo]) / (axis[hi] - axis[lo]);
    (lo, hi, t)
}

/// Weight attached to each transformed diagram point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightingFunction {
    /// `f(x, y) = w_b(y)`.
    PiecewiseLinear { b: f64 },
    /// `f = 1`. Not zero on the birth axis, so the stability bounds do not
    /// apply; available for ablations only.
    ConstantOne,
    Tabulated(TabulatedWeight),
}

impl WeightingFunction {
    pub fn piecewise_linear(b: f64) -> Result<Self> {
        if !(b > 0.0) || !b.is_finite() {
            return Err(Error::Parameter(format!(
                "weight ceiling b must be positive and finite, got {b}"
            )));
        }
        Ok(WeightingFunction::PiecewiseLinear { b })
    }

    /// Weight at a birth-persistence point.
    pub fn eval(&self, birth: f64, persistence: f64) -> f64 {
        match self {
            WeightingFunction::PiecewiseLinear { b } => ramp(*b, persistence),
            WeightingFunction::ConstantOne => 1.0,
            WeightingFunction::Tabulated(t) => t.eval(birth, persistence),
        }
    }

    pub fn ceiling(&self) -> Option<f64> {
        match self {
            WeightingFunction::PiecewiseLinear { b } => Some(*b),
            _ => None,
        }
    }

    pub fn vanishes_on_axis(&self) -> bool {
        !matches!(self, WeightingFunction::ConstantOne)
    }
}
