//! Z/2Z persistence by reducing the coboundary matrix with clearing.
//!
//! Columns of dimension `d` are processed in reverse filtration order and
//! reduced by left-to-right addition with the pivot taken as the smallest
//! coface index. This is the standard algorithm applied to the anti-transposed
//! boundary matrix and yields the same pairs as the homology reduction. Cells
//! that die in dimension `d` are skipped (cleared) when dimension `d + 1` is
//! reduced.

use crate::diagram::PersistenceDiagram;
use crate::error::{Error, Result};

use super::FilteredComplex;

const NONE: u32 = u32::MAX;

/// Birth and (if finite) death cell indices of one persistence class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PersistencePair {
    pub dim: usize,
    pub birth: usize,
    pub death: Option<usize>,
}

/// Symmetric difference of two sorted index lists.
fn add_columns(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

/// All persistence pairs of dimension `0..=max_hom_dim`, including
/// zero-length pairs and essential classes.
pub fn persistence_pairs(complex: &FilteredComplex, max_hom_dim: usize) -> Result<Vec<PersistencePair>> {
    if max_hom_dim >= u8::MAX as usize {
        return Err(Error::Structure(format!(
            "homological dimension {max_hom_dim} is out of range"
        )));
    }
    let n = complex.len();
    let cells = complex.cells();

    // Transpose the boundary into coboundary lists; they come out sorted.
    let mut counts = vec![0usize; n + 1];
    for j in 0..n {
        for &i in complex.boundary(j) {
            counts[i as usize + 1] += 1;
        }
    }
    for k in 0..n {
        counts[k + 1] += counts[k];
    }
    let offsets = counts.clone();
    let mut fill = counts;
    let mut cofaces = vec![0u32; offsets[n]];
    for j in 0..n {
        for &i in complex.boundary(j) {
            cofaces[fill[i as usize]] = j as u32;
            fill[i as usize] += 1;
        }
    }
    let coboundary = |i: usize| &cofaces[offsets[i]..offsets[i + 1]];

    let mut pairs = Vec::new();
    let mut killed = vec![false; n];
    let mut owner = vec![NONE; n];
    let mut reduced: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut col = Vec::new();
    let mut scratch = Vec::new();

    for d in 0..=max_hom_dim {
        let mut touched = Vec::new();
        for i in (0..n).rev() {
            if cells[i].dim as usize != d || killed[i] {
                continue;
            }
            col.clear();
            col.extend_from_slice(coboundary(i));
            while let Some(&low) = col.first() {
                let o = owner[low as usize];
                if o == NONE {
                    break;
                }
                add_columns(&col, &reduced[o as usize], &mut scratch);
                std::mem::swap(&mut col, &mut scratch);
            }
            match col.first() {
                Some(&low) => {
                    owner[low as usize] = i as u32;
                    touched.push(low as usize);
                    killed[low as usize] = true;
                    reduced[i] = std::mem::take(&mut col);
                    pairs.push(PersistencePair {
                        dim: d,
                        birth: i,
                        death: Some(low as usize),
                    });
                }
                None => pairs.push(PersistencePair {
                    dim: d,
                    birth: i,
                    death: None,
                }),
            }
        }
        for low in touched {
            owner[low] = NONE;
        }
        for r in reduced.iter_mut() {
            if !r.is_empty() {
                *r = Vec::new();
            }
        }
    }
    Ok(pairs)
}

/// One diagram per dimension `0..=max_hom_dim`, in filtration-value units.
///
/// Zero-persistence pairs are omitted; essential classes are dropped and
/// counted in [`PersistenceDiagram::dropped_infinite`].
pub fn persistence(complex: &FilteredComplex, max_hom_dim: usize) -> Result<Vec<PersistenceDiagram>> {
    let pairs = persistence_pairs(complex, max_hom_dim)?;
    Ok(pairs_to_diagrams(complex, &pairs, max_hom_dim))
}

pub(crate) fn pairs_to_diagrams(
    complex: &FilteredComplex,
    pairs: &[PersistencePair],
    max_hom_dim: usize,
) -> Vec<PersistenceDiagram> {
    let cells = complex.cells();
    (0..=max_hom_dim)
        .map(|d| {
            let mut essential = 0;
            let mut pts = Vec::new();
            for p in pairs.iter().filter(|p| p.dim == d) {
                match p.death {
                    None => essential += 1,
                    Some(death) => {
                        let (b, e) = (cells[p.birth].value, cells[death].value);
                        if e > b {
                            pts.push((b, e));
                        }
                    }
                }
            }
            PersistenceDiagram::from_pairs(d, pts)
                .expect("filtration values are finite and ordered")
                .with_dropped(essential)
        })
        .collect()
}

/// H0 by Kruskal-style union-find with the elder rule.
///
/// Agrees with the dimension-0 output of [`persistence`].
pub fn h0_union_find(complex: &FilteredComplex) -> PersistenceDiagram {
    let cells = complex.cells();
    let n = cells.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut pts = Vec::new();
    let mut components = 0usize;
    for (j, c) in cells.iter().enumerate() {
        match c.dim {
            0 => components += 1,
            1 => {
                let b = complex.boundary(j);
                let (ra, rb) = (find(&mut parent, b[0] as usize), find(&mut parent, b[1] as usize));
                if ra == rb {
                    continue;
                }
                // Roots are the oldest vertex of their component, so the
                // larger index is the younger one.
                let (old, young) = if ra < rb { (ra, rb) } else { (rb, ra) };
                parent[young] = old;
                components -= 1;
                if c.value > cells[young].value {
                    pts.push((cells[young].value, c.value));
                }
            }
            _ => {}
        }
    }
    PersistenceDiagram::from_pairs(0, pts)
        .expect("filtration values are finite and ordered")
        .with_dropped(components)
}
