//! Persistence diagrams and the birth-persistence change of coordinates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite (birth, death) pair with `death >= birth`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagramPoint {
    birth: f64,
    death: f64,
}

impl DiagramPoint {
    pub fn new(birth: f64, death: f64) -> Result<Self> {
        if !birth.is_finite() || !death.is_finite() {
            return Err(Error::Data(format!(
                "diagram point ({birth}, {death}) is not finite"
            )));
        }
        if death < birth {
            return Err(Error::Data(format!(
                "diagram point ({birth}, {death}) lies below the diagonal"
            )));
        }
        Ok(Self { birth, death })
    }

    #[inline]
    pub fn birth(&self) -> f64 {
        self.birth
    }

    #[inline]
    pub fn death(&self) -> f64 {
        self.death
    }

    #[inline]
    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }

    /// Image under `(x, y) -> (x, y - x)`.
    #[inline]
    pub fn to_birth_persistence(&self) -> BirthPersistencePoint {
        BirthPersistencePoint {
            birth: self.birth,
            persistence: self.death - self.birth,
        }
    }
}

/// A point of a transformed diagram, `(birth, death - birth)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BirthPersistencePoint {
    pub birth: f64,
    pub persistence: f64,
}

impl BirthPersistencePoint {
    /// Inverse of the birth-persistence transform.
    #[inline]
    pub fn to_birth_death(&self) -> (f64, f64) {
        (self.birth, self.birth + self.persistence)
    }
}

/// Multiset of finite diagram points for one homological dimension.
///
/// Points are stored as a flat list; duplicates carry multiplicity. The
/// diagonal is never stored: metrics account for it through projections.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PersistenceDiagram {
    points: Vec<DiagramPoint>,
    hom_dim: usize,
    /// Number of infinite-death pairs dropped at construction.
    dropped_infinite: usize,
}

impl PersistenceDiagram {
    pub fn new(hom_dim: usize, points: Vec<DiagramPoint>) -> Self {
        Self {
            points,
            hom_dim,
            dropped_infinite: 0,
        }
    }

    pub fn empty(hom_dim: usize) -> Self {
        Self::new(hom_dim, Vec::new())
    }

    /// Builds a diagram from raw pairs, dropping pairs whose death is `+inf`.
    ///
    /// Any other non-finite value, or a pair below the diagonal, is an error.
    pub fn from_pairs<I>(hom_dim: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let mut points = Vec::new();
        let mut dropped = 0;
        for (birth, death) in pairs {
            if death == f64::INFINITY && birth.is_finite() {
                dropped += 1;
                continue;
            }
            points.push(DiagramPoint::new(birth, death)?);
        }
        Ok(Self {
            points,
            hom_dim,
            dropped_infinite: dropped,
        })
    }

    pub(crate) fn with_dropped(mut self, dropped: usize) -> Self {
        self.dropped_infinite = dropped;
        self
    }

    #[inline]
    pub fn points(&self) -> &[DiagramPoint] {
        &self.points
    }

    #[inline]
    pub fn hom_dim(&self) -> usize {
        self.hom_dim
    }

    #[inline]
    pub fn dropped_infinite(&self) -> usize {
        self.dropped_infinite
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_persistence(&self) -> Option<f64> {
        self.points
            .iter()
            .map(DiagramPoint::persistence)
            .fold(None, |acc, p| Some(acc.map_or(p, |a: f64| a.max(p))))
    }

    /// Multiset union; the result keeps this diagram's homological dimension.
    pub fn union(&self, other: &PersistenceDiagram) -> PersistenceDiagram {
        let mut points = self.points.clone();
        points.extend_from_slice(&other.points);
        PersistenceDiagram::new(self.hom_dim, points)
    }

    /// Points sorted by (birth, death); handy for order-insensitive comparison.
    pub fn sorted_pairs(&self) -> Vec<(f64, f64)> {
        let mut v: Vec<(f64, f64)> = self.points.iter().map(|p| (p.birth, p.death)).collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        v
    }
}

/// Maps every point `(x, y)` of the diagram to `(x, y - x)`.
pub fn transform_to_birth_persistence(diagram: &PersistenceDiagram) -> Vec<BirthPersistencePoint> {
    diagram
        .points()
        .iter()
        .map(DiagramPoint::to_birth_persistence)
        .collect()
}
