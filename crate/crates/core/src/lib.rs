//! Persistence images: a stable vectorization of persistence diagrams.
//!
//! The crate covers the whole pipeline:
//!
//! * [`filtration`]: Vietoris-Rips and cubical sublevel-set filtrations and
//!   their Z/2Z persistent homology.
//! * [`image`]: persistence surfaces and images with analytic pixel integrals.
//! * [`metrics`]: Wasserstein and bottleneck distances between diagrams,
//!   vector norms, and distance matrices.
//! * [`stability`]: numerical checks of the Lipschitz bounds relating image
//!   and surface distances to the 1-Wasserstein distance.
//! * [`datasets`]: synthetic shape clouds and linked-twist-map orbits.
//! * [`ml`]: K-medoids with Voronoi iteration and the parameter sweep.
//! * [`io`]: CSV/JSON formats used by the command-line tool.

pub mod cloud;
pub mod datasets;
pub mod diagram;
pub mod error;
pub mod filtration;
pub mod image;
pub mod io;
pub mod metrics;
pub mod ml;
pub mod stability;

pub use cloud::{PointCloud, ScalarGrid};
pub use diagram::{transform_to_birth_persistence, BirthPersistencePoint, DiagramPoint, PersistenceDiagram};
pub use error::{Error, Result};
pub use image::{GridBounds, ImageSpec, KernelSpec, PersistenceImage, WeightingFunction};
