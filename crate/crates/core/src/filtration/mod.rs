//! Filtered complexes and their persistent homology.
//!
//! Two builders produce a [`FilteredComplex`]: Vietoris-Rips on a point cloud
//! and the cubical sublevel-set filtration of a scalar grid. [`persistence`]
//! reduces either one over Z/2Z.

mod cubical;
mod reduction;
mod rips;

use std::cmp::Ordering;
use std::collections::HashMap;

pub use cubical::cubical_sublevel;
pub use reduction::{h0_union_find, persistence, persistence_pairs, PersistencePair};
pub use rips::{rips_complex, rips_persistence};

use crate::error::{Error, Result};

/// Whether cells are simplices or axis-aligned cubes; fixes the face rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellKind {
    Simplex,
    Cube,
}

/// One cell: dimension, sorted vertex ids, filtration value.
///
/// Simplices carry `dim + 1` vertices. Cubes carry 1, 2 or 4 grid vertex ids
/// in increasing order; for a square `[a, b, c, d]` the vertices are laid out
/// as `a b / c d` on the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub dim: u8,
    len: u8,
    verts: [u32; 4],
    pub value: f64,
}

impl Cell {
    pub fn new(dim: u8, vertices: &[u32], value: f64) -> Self {
        debug_assert!(!vertices.is_empty() && vertices.len() <= 4);
        let mut verts = [0u32; 4];
        verts[..vertices.len()].copy_from_slice(vertices);
        verts[..vertices.len()].sort_unstable();
        Self {
            dim,
            len: vertices.len() as u8,
            verts,
            value,
        }
    }

    #[inline]
    pub fn vertices(&self) -> &[u32] {
        &self.verts[..self.len as usize]
    }

    /// Filtration order: value, then dimension, then vertices lexicographically.
    pub fn filtration_cmp(&self, other: &Cell) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then(self.dim.cmp(&other.dim))
            .then_with(|| self.vertices().cmp(other.vertices()))
    }

    fn key(&self) -> (u8, [u32; 4]) {
        (self.len, self.verts)
    }

    /// Codimension-one faces (values unset); returns the array and its length.
    fn faces(&self, kind: CellKind) -> ([Cell; 4], usize) {
        let blank = Cell {
            dim: 0,
            len: 0,
            verts: [0; 4],
            value: f64::NAN,
        };
        let mut out = [blank; 4];
        let v = self.vertices();
        let n = match (kind, v.len()) {
            (_, 1) => 0,
            (CellKind::Simplex, n) => {
                for (skip, slot) in out.iter_mut().enumerate().take(n) {
                    let mut len = 0;
                    for (i, &x) in v.iter().enumerate() {
                        if i != skip {
                            slot.verts[len] = x;
                            len += 1;
                        }
                    }
                    slot.len = len as u8;
                    slot.dim = self.dim - 1;
                }
                n
            }
            (CellKind::Cube, 2) => {
                out[0] = Cell::new(0, &v[..1], f64::NAN);
                out[1] = Cell::new(0, &v[1..], f64::NAN);
                2
            }
            (CellKind::Cube, 4) => {
                for (slot, e) in out
                    .iter_mut()
                    .zip([[v[0], v[1]], [v[2], v[3]], [v[0], v[2]], [v[1], v[3]]])
                {
                    *slot = Cell::new(1, &e, f64::NAN);
                }
                4
            }
            (CellKind::Cube, n) => unreachable!("cube with {n} vertices"),
        };
        (out, n)
    }
}

/// Cells in filtration order with their boundary columns.
#[derive(Debug, Clone)]
pub struct FilteredComplex {
    kind: CellKind,
    cells: Vec<Cell>,
    /// CSR boundary: faces of cell `j` are `faces[offsets[j]..offsets[j + 1]]`.
    offsets: Vec<usize>,
    faces: Vec<u32>,
}

impl FilteredComplex {
    /// Sorts `cells` into filtration order and validates the result.
    pub fn from_unsorted(kind: CellKind, mut cells: Vec<Cell>) -> Result<Self> {
        cells.sort_by(Cell::filtration_cmp);
        Self::from_sorted(kind, cells)
    }

    /// Validates that `cells` is a filtration: every face is present, comes
    /// earlier, and has a value no larger than its coface.
    pub fn from_sorted(kind: CellKind, cells: Vec<Cell>) -> Result<Self> {
        if cells.len() > u32::MAX as usize {
            return Err(Error::Structure("too many cells".into()));
        }
        let top = cells.iter().map(|c| c.dim).max().unwrap_or(0);
        let mut index: HashMap<(u8, [u32; 4]), u32> = HashMap::new();
        let mut offsets = Vec::with_capacity(cells.len() + 1);
        let mut faces = Vec::new();
        offsets.push(0);
        for (j, cell) in cells.iter().enumerate() {
            if !cell.value.is_finite() {
                return Err(Error::Structure(format!("cell {j} has non-finite value")));
            }
            if j > 0 && cells[j - 1].value > cell.value {
                return Err(Error::Structure(format!(
                    "cell {j} value {} precedes a larger value {}",
                    cell.value,
                    cells[j - 1].value
                )));
            }
            if cell.dim > 0 {
                let mut col: Vec<u32> = Vec::with_capacity(cell.len as usize);
                let (fs, nf) = cell.faces(kind);
                for face in &fs[..nf] {
                    let i = *index.get(&face.key()).ok_or_else(|| {
                        Error::Structure(format!(
                            "face {:?} of cell {j} is missing or comes later",
                            face.vertices()
                        ))
                    })?;
                    if cells[i as usize].value > cell.value {
                        return Err(Error::Structure(format!(
                            "face of cell {j} enters after it"
                        )));
                    }
                    col.push(i);
                }
                col.sort_unstable();
                faces.extend_from_slice(&col);
            }
            offsets.push(faces.len());
            if cell.dim < top && index.insert(cell.key(), j as u32).is_some() {
                return Err(Error::Structure(format!("cell {j} is duplicated")));
            }
        }
        Ok(Self {
            kind,
            cells,
            offsets,
            faces,
        })
    }

    #[inline]
    pub fn kind(&self) -> CellKind {
        self.kind
    }

    #[inline]
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Sorted indices of the codimension-one faces of cell `j`.
    #[inline]
    pub fn boundary(&self, j: usize) -> &[u32] {
        &self.faces[self.offsets[j]..self.offsets[j + 1]]
    }

    /// Number of cells of each dimension, indexed by dimension.
    pub fn cell_counts(&self) -> Vec<usize> {
        let top = self.cells.iter().map(|c| c.dim as usize).max().unwrap_or(0);
        let mut counts = vec![0; top + 1];
        for c in &self.cells {
            counts[c.dim as usize] += 1;
        }
        counts
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cell_counts()
            .iter()
            .enumerate()
            .map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }
}
