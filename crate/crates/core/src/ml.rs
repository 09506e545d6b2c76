//! K-medoids clustering by Voronoi iteration, accuracy scoring, and the
//! resolution/variance sweep.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datasets::{mix_seed, shared_image_bounds};
use crate::diagram::PersistenceDiagram;
use crate::error::{param, Result};
use crate::image::{compute_image, ImageSpec};
use crate::metrics::{build_distance_matrix, vector_distance, DistanceMatrix, Norm, Provenance};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    /// Object indices of the medoids, ascending.
    pub medoids: Vec<usize>,
    /// For each object, the object index of its medoid.
    pub assignment: Vec<usize>,
    /// Sum of distances from each object to its medoid.
    pub score: f64,
    /// Restart that produced this clustering.
    pub restart: usize,
}

/// Nearest-medoid assignment; ties go to the earliest medoid in `medoids`.
pub fn assign(matrix: &DistanceMatrix, medoids: &[usize]) -> (Vec<usize>, f64) {
    let mut score = 0.0;
    let assignment = (0..matrix.len())
        .map(|i| {
            let mut best = medoids[0];
            let mut dist = matrix.get(i, best);
            for &m in &medoids[1..] {
                let d = matrix.get(i, m);
                if d < dist {
                    best = m;
                    dist = d;
                }
            }
            score += dist;
            best
        })
        .collect();
    (assignment, score)
}

/// Voronoi iteration from the given medoids until the score stops strictly
/// decreasing. Returns the clustering and the score after every round.
pub fn voronoi_iteration(matrix: &DistanceMatrix, initial: &[usize]) -> (Clustering, Vec<f64>) {
    let mut medoids = initial.to_vec();
    medoids.sort_unstable();
    let (mut assignment, mut score) = assign(matrix, &medoids);
    let mut history = vec![score];
    loop {
        let mut next = medoids.clone();
        for s in 0..next.len() {
            let current = next[s];
            let members: Vec<usize> = (0..matrix.len()).filter(|&i| assignment[i] == current).collect();
            let cost = |c: usize| members.iter().map(|&i| matrix.get(c, i)).sum::<f64>();
            let mut best = current;
            let mut best_cost = cost(best);
            for &c in &members {
                if next.contains(&c) {
                    continue;
                }
                let v = cost(c);
                if v < best_cost {
                    best = c;
                    best_cost = v;
                }
            }
            next[s] = best;
        }
        next.sort_unstable();
        if next == medoids {
            break;
        }
        let (a, s) = assign(matrix, &next);
        if !(s < score) {
            break;
        }
        medoids = next;
        assignment = a;
        score = s;
        history.push(score);
    }
    (
        Clustering {
            medoids,
            assignment,
            score,
            restart: 0,
        },
        history,
    )
}

/// Best of `restarts` Voronoi iterations from random distinct medoid sets.
///
/// Restart `t` draws its medoids with seed `mix_seed(seed, t)`. Among equal
/// scores the lowest restart index wins.
pub fn kmedoids(matrix: &DistanceMatrix, k: usize, restarts: usize, seed: u64) -> Result<Clustering> {
    let n = matrix.len();
    if k == 0 || k > n {
        return param(format!("need 1 <= K <= {n}, got K = {k}"));
    }
    if restarts == 0 {
        return param("need at least one restart");
    }
    let best = (0..restarts)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, t as u64));
            let init = index::sample(&mut rng, n, k).into_vec();
            let (mut c, history) = voronoi_iteration(matrix, &init);
            debug_assert!(history.windows(2).all(|w| w[1] <= w[0]));
            c.restart = t;
            c
        })
        .reduce_with(|a, b| {
            if b.score < a.score || (b.score == a.score && b.restart < a.restart) {
                b
            } else {
                a
            }
        })
        .expect("at least one restart");
    Ok(best)
}

/// Fraction of objects whose medoid has the same label as the object.
pub fn clustering_accuracy<S: AsRef<str>>(clustering: &Clustering, labels: &[S]) -> Result<f64> {
    let n = clustering.assignment.len();
    if labels.len() != n {
        return param(format!("{} labels for {n} objects", labels.len()));
    }
    if n == 0 {
        return param("empty clustering");
    }
    let hits = (0..n)
        .filter(|&i| labels[i].as_ref() == labels[clustering.assignment[i]].as_ref())
        .count();
    Ok(hits as f64 / n as f64)
}

/// Settings shared by every cell of a sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub norm: Norm,
    pub k: usize,
    pub restarts: usize,
    pub seed: u64,
}

/// One `(resolution, sigma)` cell of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub resolution: usize,
    pub sigma: f64,
    pub accuracy: f64,
    pub score: f64,
}

/// Images of all diagrams on a shared grid with `b` set to the largest
/// persistence in the set.
pub fn shared_images(diagrams: &[PersistenceDiagram], resolution: usize, sigma: f64) -> Result<Vec<Vec<f64>>> {
    let (bounds, b) = shared_image_bounds(diagrams, sigma)?;
    let spec = ImageSpec::new((resolution, resolution), sigma, b, bounds)?;
    diagrams
        .par_iter()
        .map(|d| compute_image(d, &spec).map(|img| img.pixels().to_vec()))
        .collect()
}

/// Images, distance matrix, K-medoids and accuracy for one parameter choice.
pub fn image_pipeline<S: AsRef<str> + Sync>(
    diagrams: &[PersistenceDiagram],
    labels: &[S],
    resolution: usize,
    sigma: f64,
    config: &PipelineConfig,
) -> Result<(Clustering, f64)> {
    if labels.len() != diagrams.len() {
        return param(format!("{} labels for {} diagrams", labels.len(), diagrams.len()));
    }
    let images = shared_images(diagrams, resolution, sigma)?;
    let prov = Provenance::new("pi", config.norm.to_string())
        .with("resolution", resolution)
        .with("sigma", sigma);
    let names = labels.iter().map(|l| l.as_ref().to_string()).collect();
    let matrix = build_distance_matrix(&images, names, |a, b| vector_distance(a, b, config.norm), prov)?;
    let clustering = kmedoids(&matrix, config.k, config.restarts, config.seed)?;
    let accuracy = clustering_accuracy(&clustering, labels)?;
    Ok((clustering, accuracy))
}

/// Runs [`image_pipeline`] for every resolution and sigma, resolution-major.
pub fn parameter_sweep<S: AsRef<str> + Sync>(
    diagrams: &[PersistenceDiagram],
    labels: &[S],
    resolutions: &[usize],
    sigmas: &[f64],
    config: &PipelineConfig,
) -> Result<Vec<SweepCell>> {
    let mut cells = Vec::with_capacity(resolutions.len() * sigmas.len());
    for &resolution in resolutions {
        for &sigma in sigmas {
            let (c, accuracy) = image_pipeline(diagrams, labels, resolution, sigma, config)?;
            cells.push(SweepCell {
                resolution,
                sigma,
                accuracy,
                score: c.score,
            });
        }
    }
    Ok(cells)
}
