//! Synthetic point clouds: six noisy shape classes and linked twist map orbits.
//!
//! All randomness comes from [`ChaCha8Rng`], which produces the same stream on
//! every platform. Batch generators derive one seed per instance with
//! [`mix_seed`], so instances can be generated in any order or in parallel.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cloud::PointCloud;
use crate::diagram::PersistenceDiagram;
use crate::error::{param, Error, Result};
use crate::image::GridBounds;

/// Name of the random generator, for output metadata.
pub const GENERATOR: &str = "ChaCha8Rng (rand_chacha 0.9), splitmix64 seed mixing";

pub const TORUS_MAJOR: f64 = 2.0;
pub const TORUS_MINOR: f64 = 1.0;
/// Standard deviation of each blob in the three-cluster shape.
pub const CLUSTER_SIGMA: f64 = 0.05;
/// Scale of the inner pattern in the nested-cluster shape.
pub const NESTED_SCALE: f64 = 0.2;

/// Default linked twist map parameters.
pub const LTM_RS: [f64; 5] = [2.5, 3.5, 4.0, 4.1, 4.3];
pub const LTM_ITERATIONS: usize = 1000;

/// splitmix64 finalizer applied to `base + (index + 1) * golden`.
pub fn mix_seed(base: u64, index: u64) -> u64 {
    let mut z = base.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeClass {
    SolidCube,
    Circle,
    Sphere,
    ThreeClusters,
    NestedClusters,
    Torus,
}

impl ShapeClass {
    pub const ALL: [ShapeClass; 6] = [
        ShapeClass::SolidCube,
        ShapeClass::Circle,
        ShapeClass::Sphere,
        ShapeClass::ThreeClusters,
        ShapeClass::NestedClusters,
        ShapeClass::Torus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ShapeClass::SolidCube => "solid_cube",
            ShapeClass::Circle => "circle",
            ShapeClass::Sphere => "sphere",
            ShapeClass::ThreeClusters => "three_clusters",
            ShapeClass::NestedClusters => "nested_clusters",
            ShapeClass::Torus => "torus",
        }
    }
}

impl fmt::Display for ShapeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ShapeClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ShapeClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .map_or_else(|| param(format!("unknown shape class {s:?}")), Ok)
    }
}

/// Vertices of the unit equilateral triangle in the `z = 0` plane.
fn triangle() -> [[f64; 3]; 3] {
    [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.5, 3f64.sqrt() / 2.0, 0.0]]
}

fn blob_centers(class: ShapeClass) -> (Vec<[f64; 3]>, f64) {
    let tri = triangle();
    match class {
        ShapeClass::ThreeClusters => (tri.to_vec(), CLUSTER_SIGMA),
        _ => {
            let centroid = [0.5, 3f64.sqrt() / 6.0, 0.0];
            let mut centers = Vec::with_capacity(9);
            for c in tri {
                for v in tri {
                    centers.push(std::array::from_fn(|k| c[k] + NESTED_SCALE * (v[k] - centroid[k])));
                }
            }
            (centers, CLUSTER_SIGMA * NESTED_SCALE)
        }
    }
}

fn ideal_point<R: Rng>(class: ShapeClass, rng: &mut R) -> [f64; 3] {
    match class {
        ShapeClass::SolidCube => [rng.random(), rng.random(), rng.random()],
        ShapeClass::Circle => {
            let t = TAU * rng.random::<f64>();
            [t.cos(), t.sin(), 0.0]
        }
        ShapeClass::Sphere => loop {
            let v: [f64; 3] = std::array::from_fn(|_| StandardNormal.sample(rng));
            let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            if n > 1e-12 {
                break v.map(|x| x / n);
            }
        },
        ShapeClass::ThreeClusters | ShapeClass::NestedClusters => {
            let (centers, s) = blob_centers(class);
            let c = centers[rng.random_range(0..centers.len())];
            std::array::from_fn(|k| {
                let g: f64 = StandardNormal.sample(rng);
                if k < 2 {
                    c[k] + s * g
                } else {
                    s * g
                }
            })
        }
        ShapeClass::Torus => loop {
            let theta = TAU * rng.random::<f64>();
            let phi = TAU * rng.random::<f64>();
            let accept = (TORUS_MAJOR + TORUS_MINOR * theta.cos()) / (TORUS_MAJOR + TORUS_MINOR);
            if rng.random::<f64>() < accept {
                let ring = TORUS_MAJOR + TORUS_MINOR * theta.cos();
                break [ring * phi.cos(), ring * phi.sin(), TORUS_MINOR * theta.sin()];
            }
        },
    }
}

/// `n_points` samples of `class` in R^3 with Gaussian noise of std `noise`
/// added to each coordinate. The cloud is labeled with the class name.
pub fn sample_shape(class: ShapeClass, n_points: usize, noise: f64, seed: u64) -> Result<PointCloud> {
    if n_points == 0 {
        return param("need at least one point");
    }
    if !(noise >= 0.0) || !noise.is_finite() {
        return param(format!("noise must be finite and non-negative, got {noise}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, noise).map_err(|e| Error::Parameter(e.to_string()))?;
    let points = (0..n_points)
        .map(|_| {
            let p = ideal_point(class, &mut rng);
            if noise > 0.0 {
                p.iter().map(|x| x + normal.sample(&mut rng)).collect()
            } else {
                p.to_vec()
            }
        })
        .collect();
    Ok(PointCloud::new(points)?.with_label(class.name()))
}

/// `per_class` clouds of every class, class-major. Instance `i` of class `c`
/// uses seed `mix_seed(mix_seed(seed, c), i)`.
pub fn shape_dataset(per_class: usize, n_points: usize, noise: f64, seed: u64) -> Result<Vec<PointCloud>> {
    let jobs: Vec<(ShapeClass, u64)> = ShapeClass::ALL
        .iter()
        .enumerate()
        .flat_map(|(c, &class)| (0..per_class).map(move |i| (class, mix_seed(mix_seed(seed, c as u64), i as u64))))
        .collect();
    jobs.into_par_iter()
        .map(|(class, s)| sample_shape(class, n_points, noise, s))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LtmParams {
    pub r: f64,
    pub n_iterations: usize,
    pub seed: u64,
}

impl LtmParams {
    pub fn new(r: f64, n_iterations: usize, seed: u64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return param(format!("twist parameter r must be positive, got {r}"));
        }
        if n_iterations == 0 {
            return param("need at least one iteration");
        }
        Ok(Self { r, n_iterations, seed })
    }
}

/// Orbit of the linked twist map from a uniform random start in `[0, 1)^2`.
///
/// Returns `n_iterations + 1` points, labeled `r=<r>`.
pub fn ltm_orbit(params: &LtmParams) -> Result<PointCloud> {
    let p = LtmParams::new(params.r, params.n_iterations, params.seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let (x0, y0) = (rng.random::<f64>(), rng.random::<f64>());
    let orbit = ltm_orbit_from(p.r, p.n_iterations, x0, y0)?;
    Ok(PointCloud::new(orbit.into_iter().map(|(x, y)| vec![x, y]).collect())?.with_label(format!("r={}", p.r)))
}

/// Orbit from an explicit start:
/// `x' = x + r y (1 - y) mod 1` and `y' = y + r x (1 - x) mod 1`.
pub fn ltm_orbit_from(r: f64, n_iterations: usize, x0: f64, y0: f64) -> Result<Vec<(f64, f64)>> {
    if !(r > 0.0) || !r.is_finite() {
        return param(format!("twist parameter r must be positive, got {r}"));
    }
    if !((0.0..1.0).contains(&x0) && (0.0..1.0).contains(&y0)) {
        return param(format!("start ({x0}, {y0}) is outside [0, 1)^2"));
    }
    let mut orbit = Vec::with_capacity(n_iterations + 1);
    let (mut x, mut y) = (x0, y0);
    orbit.push((x, y));
    for _ in 0..n_iterations {
        let nx = x + r * y * (1.0 - y);
        let ny = y + r * x * (1.0 - x);
        debug_assert!(nx >= 0.0 && ny >= 0.0);
        x = nx % 1.0;
        y = ny % 1.0;
        orbit.push((x, y));
    }
    Ok(orbit)
}

/// `per_r` orbits for each value in `rs`, r-major, each subsampled to at most
/// `max_points` points.
pub fn ltm_dataset(rs: &[f64], per_r: usize, n_iterations: usize, max_points: usize, seed: u64) -> Result<Vec<PointCloud>> {
    let jobs: Vec<(f64, u64)> = rs
        .iter()
        .enumerate()
        .flat_map(|(k, &r)| (0..per_r).map(move |i| (r, mix_seed(mix_seed(seed, k as u64), i as u64))))
        .collect();
    jobs.into_par_iter()
        .map(|(r, s)| {
            let orbit = ltm_orbit(&LtmParams::new(r, n_iterations, s)?)?;
            subsample(&orbit, max_points, mix_seed(s, u64::MAX))
        })
        .collect()
}

/// Uniform random subset of `n` points without replacement, in original order.
/// Clouds with at most `n` points are returned unchanged.
pub fn subsample(cloud: &PointCloud, n: usize, seed: u64) -> Result<PointCloud> {
    if n == 0 {
        return param("subsample size must be positive");
    }
    if cloud.len() <= n {
        return Ok(cloud.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = index::sample(&mut rng, cloud.len(), n).into_vec();
    picked.sort_unstable();
    let points = picked.into_iter().map(|i| cloud.points()[i].clone()).collect();
    let sub = PointCloud::new(points)?;
    Ok(match cloud.label() {
        Some(l) => sub.with_label(l),
        None => sub,
    })
}

/// Grid bounds and ramp parameter `b` shared by every diagram of an experiment.
///
/// `b` is the largest persistence over all diagrams; bounds follow
/// [`GridBounds::padded`] over all births.
pub fn shared_image_bounds(diagrams: &[PersistenceDiagram], sigma: f64) -> Result<(GridBounds, f64)> {
    if diagrams.is_empty() {
        return param("no diagrams given");
    }
    if !(sigma > 0.0) {
        return param(format!("sigma must be positive, got {sigma}"));
    }
    let mut b = f64::NEG_INFINITY;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in diagrams.iter().flat_map(|d| d.points()) {
        b = b.max(p.persistence());
        lo = lo.min(p.birth());
        hi = hi.max(p.birth());
    }
    if !(b > 0.0) {
        return Err(Error::Data("every diagram is empty; no scale to build bounds from".into()));
    }
    Ok((GridBounds::padded(lo, hi, b, sigma), b))
}

/// Points on the unit circle in the plane, evenly spaced.
pub fn circle_points(n: usize) -> Result<PointCloud> {
    PointCloud::new((0..n).map(|i| {
        let t = 2.0 * PI * i as f64 / n as f64;
        vec![t.cos(), t.sin()]
    }).collect())
}
