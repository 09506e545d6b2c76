use crate::cloud::PointCloud;
use crate::diagram::PersistenceDiagram;
use crate::error::{param, Result};

use super::{persistence, Cell, CellKind, FilteredComplex};

/// Vietoris-Rips filtration on the Euclidean cloud, up to `max_dim` (1 or 2).
///
/// Vertices enter at 0, an edge at its length when that is at most
/// `max_scale`, a triangle at its longest edge. `max_scale = None` means the
/// cloud diameter, i.e. every edge is present.
pub fn rips_complex(cloud: &PointCloud, max_dim: usize, max_scale: Option<f64>) -> Result<FilteredComplex> {
    if cloud.is_empty() {
        return param("Rips complex of an empty cloud");
    }
    if !(1..=2).contains(&max_dim) {
        return param(format!("Rips max_dim must be 1 or 2, got {max_dim}"));
    }
    let scale = match max_scale {
        Some(s) if s.is_nan() || s < 0.0 => return param(format!("max_scale must be non-negative, got {s}")),
        Some(s) => s,
        None => f64::INFINITY,
    };
    let n = cloud.len();
    if n > u32::MAX as usize / 2 {
        return param("cloud is too large");
    }
    let mut dist = vec![f64::NAN; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = cloud.distance(i, j);
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }
    let present = |i: usize, j: usize| dist[i * n + j] <= scale;

    let mut cells: Vec<Cell> = (0..n as u32).map(|v| Cell::new(0, &[v], 0.0)).collect();
    for i in 0..n {
        for j in i + 1..n {
            if present(i, j) {
                cells.push(Cell::new(1, &[i as u32, j as u32], dist[i * n + j]));
            }
        }
    }
    if max_dim == 2 {
        for i in 0..n {
            for j in i + 1..n {
                if !present(i, j) {
                    continue;
                }
                let dij = dist[i * n + j];
                for k in j + 1..n {
                    if present(i, k) && present(j, k) {
                        let v = dij.max(dist[i * n + k]).max(dist[j * n + k]);
                        cells.push(Cell::new(2, &[i as u32, j as u32, k as u32], v));
                    }
                }
            }
        }
    }
    FilteredComplex::from_unsorted(CellKind::Simplex, cells)
}

/// H0 and H1 (when `max_hom_dim` is 1) diagrams of the Rips filtration.
pub fn rips_persistence(
    cloud: &PointCloud,
    max_hom_dim: usize,
    max_scale: Option<f64>,
) -> Result<Vec<PersistenceDiagram>> {
    if max_hom_dim > 1 {
        return param(format!("Rips persistence supports H0 and H1, asked for H{max_hom_dim}"));
    }
    let complex = rips_complex(cloud, max_hom_dim + 1, max_scale)?;
    persistence(&complex, max_hom_dim)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cloud(pts: &[&[f64]]) -> PointCloud {
        PointCloud::new(pts.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    #[test]
    fn two_points() {
        let c = cloud(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let k = rips_complex(&c, 2, Some(2.0)).unwrap();
        assert_eq!(k.cell_counts(), vec![2, 1]);
        assert_eq!(k.cells()[2].value, 1.0);
        let d = rips_persistence(&c, 0, None).unwrap();
        assert_eq!(d[0].sorted_pairs(), vec![(0.0, 1.0)]);
        assert_eq!(d[0].dropped_infinite(), 1);
    }

    #[test]
    fn equilateral_triangle_enters_with_its_edges() {
        let h = 3f64.sqrt() / 2.0;
        let c = cloud(&[&[0.0, 0.0], &[1.0, 0.0], &[0.5, h]]);
        let k = rips_complex(&c, 2, None).unwrap();
        let tri = k.cells().iter().find(|c| c.dim == 2).unwrap();
        let emax = k.cells().iter().filter(|c| c.dim == 1).map(|c| c.value).fold(0.0, f64::max);
        assert_eq!(tri.value, emax);
        assert!((tri.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unit_square() {
        let c = cloud(&[&[0.0, 0.0], &[1.0, 0.0], &[1.0, 1.0], &[0.0, 1.0]]);
        let k = rips_complex(&c, 2, None).unwrap();
        let edges: Vec<f64> = k.cells().iter().filter(|c| c.dim == 1).map(|c| c.value).collect();
        assert_eq!(edges.len(), 6);
        assert_eq!(edges.iter().filter(|&&v| v == 1.0).count(), 4);
        assert_eq!(edges.iter().filter(|&&v| v == 2f64.sqrt()).count(), 2);
        assert!(k.cells().iter().filter(|c| c.dim == 2).all(|c| c.value == 2f64.sqrt()));
        let d = rips_persistence(&c, 1, None).unwrap();
        assert_eq!(d[1].sorted_pairs(), vec![(1.0, 2f64.sqrt())]);
    }

    #[test]
    fn scale_cap_drops_long_edges() {
        let c = cloud(&[&[0.0], &[1.0], &[3.0]]);
        let k = rips_complex(&c, 1, Some(1.5)).unwrap();
        assert_eq!(k.cell_counts(), vec![3, 1]);
        let d = persistence(&k, 0).unwrap();
        assert_eq!(d[0].dropped_infinite(), 2);
    }

    #[test]
    fn rejects_bad_arguments() {
        let c = cloud(&[&[0.0]]);
        assert!(rips_complex(&c, 3, None).is_err());
        assert!(rips_complex(&c, 0, None).is_err());
        assert!(rips_complex(&c, 1, Some(-1.0)).is_err());
    }
}
