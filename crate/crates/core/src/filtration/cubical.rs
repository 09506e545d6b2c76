use crate::cloud::ScalarGrid;
use crate::error::Result;

use super::{Cell, CellKind, FilteredComplex};

/// Sublevel-set filtration of a grid function on its cubical complex.
///
/// A vertex enters at its value, an edge once both endpoints are present and
/// a square once all four corners are present.
pub fn cubical_sublevel(grid: &ScalarGrid) -> Result<FilteredComplex> {
    let (rows, cols) = grid.shape();
    let id = |r: usize, c: usize| (r * cols + c) as u32;
    let mut cells = Vec::with_capacity(4 * rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            cells.push(Cell::new(0, &[id(r, c)], grid.get(r, c)));
            if c + 1 < cols {
                let v = grid.get(r, c).max(grid.get(r, c + 1));
                cells.push(Cell::new(1, &[id(r, c), id(r, c + 1)], v));
            }
            if r + 1 < rows {
                let v = grid.get(r, c).max(grid.get(r + 1, c));
                cells.push(Cell::new(1, &[id(r, c), id(r + 1, c)], v));
            }
            if r + 1 < rows && c + 1 < cols {
                let v = grid
                    .get(r, c)
                    .max(grid.get(r, c + 1))
                    .max(grid.get(r + 1, c))
                    .max(grid.get(r + 1, c + 1));
                cells.push(Cell::new(
                    2,
                    &[id(r, c), id(r, c + 1), id(r + 1, c), id(r + 1, c + 1)],
                    v,
                ));
            }
        }
    }
    FilteredComplex::from_unsorted(CellKind::Cube, cells)
}
