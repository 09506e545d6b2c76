//! Distances between diagrams and between image vectors, and distance matrices.

pub mod assignment;
mod diagram_distance;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use diagram_distance::{
    bottleneck, diagonal_distance, matching_cost_max, matching_cost_p, pair_cost, sup_distance, wasserstein,
    Matching, Slot,
};

use crate::error::{param, Error, Result};

/// Vector norm used to compare flattened images.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    L1,
    L2,
    Linf,
}

impl Norm {
    pub const ALL: [Norm; 3] = [Norm::L1, Norm::L2, Norm::Linf];
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Norm::L1 => "l1",
            Norm::L2 => "l2",
            Norm::Linf => "linf",
        })
    }
}

impl FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1" => Ok(Norm::L1),
            "l2" => Ok(Norm::L2),
            "linf" | "l-inf" | "max" => Ok(Norm::Linf),
            other => param(format!("unknown norm {other:?}")),
        }
    }
}

/// The named norm of `a - b`.
pub fn vector_distance(a: &[f64], b: &[f64], norm: Norm) -> Result<f64> {
    if a.len() != b.len() {
        return param(format!("vector lengths differ: {} vs {}", a.len(), b.len()));
    }
    let diffs = a.iter().zip(b).map(|(x, y)| (x - y).abs());
    Ok(match norm {
        Norm::L1 => diffs.sum(),
        Norm::L2 => diffs.map(|d| d * d).sum::<f64>().sqrt(),
        Norm::Linf => diffs.fold(0.0, f64::max),
    })
}

/// Where a distance matrix came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// `"pd"` or `"pi"`, or anything else a caller uses.
    pub representation: String,
    pub metric: String,
    #[serde(default)]
    pub parameters: serde_json::Map<String, serde_json::Value>,
}

impl Provenance {
    pub fn new(representation: impl Into<String>, metric: impl Into<String>) -> Self {
        Self {
            representation: representation.into(),
            metric: metric.into(),
            parameters: serde_json::Map::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }
}

/// Symmetric, non-negative matrix with zero diagonal over labeled objects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceMatrix {
    labels: Vec<String>,
    values: Vec<f64>,
    provenance: Provenance,
}

impl DistanceMatrix {
    /// Row-major `values`; validated for shape, symmetry and zero diagonal.
    pub fn new(labels: Vec<String>, values: Vec<f64>, provenance: Provenance) -> Result<Self> {
        let n = labels.len();
        if values.len() != n * n {
            return Err(Error::Data(format!(
                "{n} labels need {} matrix entries, got {}",
                n * n,
                values.len()
            )));
        }
        for i in 0..n {
            if values[i * n + i] != 0.0 {
                return Err(Error::Data(format!("diagonal entry {i} is not zero")));
            }
            for j in i + 1..n {
                let (a, b) = (values[i * n + j], values[j * n + i]);
                if a != b {
                    return Err(Error::Data(format!("entries ({i},{j}) and ({j},{i}) differ")));
                }
                if !(a >= 0.0) || !a.is_finite() {
                    return Err(Error::Data(format!("entry ({i},{j}) = {a} is not a distance")));
                }
            }
        }
        Ok(Self {
            labels,
            values,
            provenance,
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.len() + j]
    }

    #[inline]
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }
}

/// Applies `metric` once to every unordered pair, in parallel.
///
/// A failing pair is reported with its indices; when several fail, the
/// lexicographically first pair wins so the error is deterministic.
pub fn build_distance_matrix<T, F>(
    objects: &[T],
    labels: Vec<String>,
    metric: F,
    provenance: Provenance,
) -> Result<DistanceMatrix>
where
    T: Sync,
    F: Fn(&T, &T) -> Result<f64> + Sync,
{
    let n = objects.len();
    if labels.len() != n {
        return param(format!("{} labels for {n} objects", labels.len()));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let results: Vec<Result<f64>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let d = metric(&objects[i], &objects[j])?;
            if !(d >= 0.0) || !d.is_finite() {
                return Err(Error::Data(format!("metric returned {d}")));
            }
            Ok(d)
        })
        .collect();
    let mut values = vec![0.0; n * n];
    for (&(i, j), r) in pairs.iter().zip(results) {
        let d = r.map_err(|e| Error::Pair {
            i,
            j,
            source: Box::new(e),
        })?;
        values[i * n + j] = d;
        values[j * n + i] = d;
    }
    DistanceMatrix::new(labels, values, provenance)
}
