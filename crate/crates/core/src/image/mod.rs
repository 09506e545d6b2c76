//! Persistence surfaces and persistence images.
//!
//! A diagram is moved to birth-persistence coordinates, every point `u`
//! contributes `f(u) * g_u` to the surface, and the image integrates the
//! surface over a fixed pixel grid. The Gaussian is separable, so each pixel
//! integral is a product of two normal-CDF differences; no numerical
//! quadrature is involved.
//!
//! Pixel layout is row-major with rows along the persistence axis (row 0 is
//! the lowest persistence band) and columns along the birth axis.

mod kernel;
mod weighting;

use serde::{Deserialize, Serialize};

pub use kernel::KernelSpec;
pub(crate) use kernel::normal_interval;
pub use weighting::{weight_wb, TabulatedWeight, WeightingFunction};

use crate::diagram::{transform_to_birth_persistence, PersistenceDiagram};
use crate::error::{param, Error, Result};

/// Rectangle in birth-persistence coordinates covered by the pixel grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridBounds {
    pub birth_min: f64,
    pub birth_max: f64,
    pub pers_min: f64,
    pub pers_max: f64,
}

impl GridBounds {
    pub fn new(birth_min: f64, birth_max: f64, pers_min: f64, pers_max: f64) -> Self {
        Self {
            birth_min,
            birth_max,
            pers_min,
            pers_max,
        }
    }

    /// Default experiment bounds: births from `min(0, min_birth)` to
    /// `max_birth`, persistence from 0 to `max_persistence`, with the top and
    /// right edges padded by `3 sigma`.
    pub fn padded(min_birth: f64, max_birth: f64, max_persistence: f64, sigma: f64) -> Self {
        let pad = 3.0 * sigma;
        Self {
            birth_min: min_birth.min(0.0),
            birth_max: max_birth.max(0.0) + pad,
            pers_min: 0.0,
            pers_max: max_persistence.max(0.0) + pad,
        }
    }
}

/// Everything needed to turn a diagram into an image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageSpec {
    /// `(rows, cols)`; rows index persistence, cols index birth.
    pub resolution: (usize, usize),
    pub kernel: KernelSpec,
    pub weighting: WeightingFunction,
    pub bounds: GridBounds,
    /// H0 mode: a single row of 1-D Gaussians along the persistence axis.
    pub one_dimensional: bool,
}

impl ImageSpec {
    /// 2-D spec with the piecewise-linear weighting `w_b`.
    pub fn new(resolution: (usize, usize), sigma: f64, b: f64, bounds: GridBounds) -> Result<Self> {
        let spec = Self {
            resolution,
            kernel: KernelSpec::new(sigma)?,
            weighting: WeightingFunction::piecewise_linear(b)?,
            bounds,
            one_dimensional: false,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// 1-D spec: `pixels` bins over `[pers_min, pers_max]`; birth bounds unused.
    pub fn one_dimensional(pixels: usize, sigma: f64, b: f64, pers_min: f64, pers_max: f64) -> Result<Self> {
        let spec = Self {
            resolution: (1, pixels),
            kernel: KernelSpec::new(sigma)?,
            weighting: WeightingFunction::piecewise_linear(b)?,
            bounds: GridBounds::new(0.0, 0.0, pers_min, pers_max),
            one_dimensional: true,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_weighting(mut self, weighting: WeightingFunction) -> Self {
        self.weighting = weighting;
        self
    }

    #[inline]
    pub fn sigma(&self) -> f64 {
        self.kernel.sigma()
    }

    /// The `b` of `w_b`, when that is the weighting in use.
    pub fn weight_ceiling_b(&self) -> Option<f64> {
        self.weighting.ceiling()
    }

    pub fn pixel_count(&self) -> usize {
        self.resolution.0 * self.resolution.1
    }

    pub fn validate(&self) -> Result<()> {
        let (rows, cols) = self.resolution;
        if rows == 0 || cols == 0 {
            return param(format!("resolution must be positive, got {rows}x{cols}"));
        }
        let b = &self.bounds;
        let finite = [b.birth_min, b.birth_max, b.pers_min, b.pers_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return param("grid bounds must be finite");
        }
        if !(b.pers_min < b.pers_max) {
            return param(format!(
                "degenerate persistence range [{}, {}]",
                b.pers_min, b.pers_max
            ));
        }
        if self.one_dimensional {
            if rows != 1 {
                return param(format!("one-dimensional image must have one row, got {rows}"));
            }
        } else if !(b.birth_min < b.birth_max) {
            return param(format!(
                "degenerate birth range [{}, {}]",
                b.birth_min, b.birth_max
            ));
        }
        Ok(())
    }

    /// Column edges along the birth axis (2-D) or persistence axis (1-D).
    pub fn col_edges(&self) -> Vec<f64> {
        let b = &self.bounds;
        if self.one_dimensional {
            edges(b.pers_min, b.pers_max, self.resolution.1)
        } else {
            edges(b.birth_min, b.birth_max, self.resolution.1)
        }
    }

    /// Row edges along the persistence axis. Empty in 1-D mode.
    pub fn row_edges(&self) -> Vec<f64> {
        if self.one_dimensional {
            return Vec::new();
        }
        edges(self.bounds.pers_min, self.bounds.pers_max, self.resolution.0)
    }

    /// Area (length in 1-D mode) of one pixel; all pixels are equal.
    pub fn pixel_area(&self) -> f64 {
        self.total_area() / self.pixel_count() as f64
    }

    pub fn total_area(&self) -> f64 {
        let b = &self.bounds;
        if self.one_dimensional {
            b.pers_max - b.pers_min
        } else {
            (b.birth_max - b.birth_min) * (b.pers_max - b.pers_min)
        }
    }
}

fn edges(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let h = (hi - lo) / n as f64;
    (0..=n)
        .map(|i| if i == n { hi } else { lo + h * i as f64 })
        .collect()
}

/// Pixel grid produced from one diagram.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersistenceImage {
    pixels: Vec<f64>,
    spec: ImageSpec,
    hom_dim: usize,
}

impl PersistenceImage {
    pub fn from_pixels(pixels: Vec<f64>, spec: ImageSpec, hom_dim: usize) -> Result<Self> {
        spec.validate()?;
        if pixels.len() != spec.pixel_count() {
            return Err(Error::Data(format!(
                "image has {} pixels, resolution needs {}",
                pixels.len(),
                spec.pixel_count()
            )));
        }
        if pixels.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::Data("image pixels must be finite and non-negative".into()));
        }
        Ok(Self {
            pixels,
            spec,
            hom_dim,
        })
    }

    #[inline]
    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    #[inline]
    pub fn spec(&self) -> &ImageSpec {
        &self.spec
    }

    #[inline]
    pub fn hom_dim(&self) -> usize {
        self.hom_dim
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.spec.resolution.0
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.spec.resolution.1
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.cols() + col]
    }

    pub fn total(&self) -> f64 {
        self.pixels.iter().sum()
    }
}

/// `rho_B(z)` for `z = (birth, persistence)`.
pub fn surface_value(
    diagram: &PersistenceDiagram,
    weighting: &WeightingFunction,
    kernel: &KernelSpec,
    z: (f64, f64),
) -> f64 {
    transform_to_birth_persistence(diagram)
        .iter()
        .map(|u| weighting.eval(u.birth, u.persistence) * kernel.density(u.birth, u.persistence, z.0, z.1))
        .sum()
}

/// Integrates the persistence surface over every pixel of a 2-D grid.
pub fn compute_image(diagram: &PersistenceDiagram, spec: &ImageSpec) -> Result<PersistenceImage> {
    spec.validate()?;
    if spec.one_dimensional {
        return param("spec is one-dimensional; use compute_image_1d");
    }
    let (rows, cols) = spec.resolution;
    let xe = spec.col_edges();
    let ye = spec.row_edges();
    let mut pixels = vec![0.0; rows * cols];
    let mut mx = vec![0.0; cols];
    let mut my = vec![0.0; rows];
    for u in transform_to_birth_persistence(diagram) {
        let w = spec.weighting.eval(u.birth, u.persistence);
        if w == 0.0 {
            continue;
        }
        for (j, m) in mx.iter_mut().enumerate() {
            *m = spec.kernel.interval_mass(u.birth, xe[j], xe[j + 1]);
        }
        for (i, m) in my.iter_mut().enumerate() {
            *m = spec.kernel.interval_mass(u.persistence, ye[i], ye[i + 1]);
        }
        for (i, &py) in my.iter().enumerate() {
            if py == 0.0 {
                continue;
            }
            let row = &mut pixels[i * cols..(i + 1) * cols];
            for (p, &px) in row.iter_mut().zip(&mx) {
                *p += w * py * px;
            }
        }
    }
    PersistenceImage::from_pixels(pixels, spec.clone(), diagram.hom_dim())
}

/// 1-D image for diagrams whose points share a single birth (typically H0).
pub fn compute_image_1d(diagram: &PersistenceDiagram, spec: &ImageSpec) -> Result<PersistenceImage> {
    spec.validate()?;
    if !spec.one_dimensional {
        return param("spec is two-dimensional; use compute_image");
    }
    if let Some(first) = diagram.points().first() {
        if let Some(other) = diagram.points().iter().find(|p| p.birth() != first.birth()) {
            return Err(Error::MixedBirths {
                first: first.birth(),
                other: other.birth(),
            });
        }
    }
    let cols = spec.resolution.1;
    let xe = spec.col_edges();
    let mut pixels = vec![0.0; cols];
    for u in transform_to_birth_persistence(diagram) {
        let w = spec.weighting.eval(u.birth, u.persistence);
        if w == 0.0 {
            continue;
        }
        for (j, p) in pixels.iter_mut().enumerate() {
            *p += w * spec.kernel.interval_mass(u.persistence, xe[j], xe[j + 1]);
        }
    }
    PersistenceImage::from_pixels(pixels, spec.clone(), diagram.hom_dim())
}

/// Dispatches on `spec.one_dimensional`.
pub fn render(diagram: &PersistenceDiagram, spec: &ImageSpec) -> Result<PersistenceImage> {
    if spec.one_dimensional {
        compute_image_1d(diagram, spec)
    } else {
        compute_image(diagram, spec)
    }
}

/// Row-major flattening of each image, joined in order.
pub fn concatenate_images(images: &[PersistenceImage]) -> Result<Vec<f64>> {
    if images.is_empty() {
        return param("cannot concatenate an empty list of images");
    }
    let mut out = Vec::with_capacity(images.iter().map(|i| i.pixels.len()).sum());
    for img in images {
        out.extend_from_slice(&img.pixels);
    }
    Ok(out)
}
