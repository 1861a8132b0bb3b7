//! Functional principal component analysis for curves whose values live in
//! a metric space: distributions under the 2-Wasserstein metric, weighted
//! networks, covariance matrices, and plain scalars.
//!
//! The pipeline estimates the metric auto-covariance surface with a
//! pairwise U-statistic, decomposes it as an integral operator, and maps
//! each eigenfunction back to the object space through a weighted Fréchet
//! integral. Scores come from projecting distance-to-mean curves onto the
//! eigenfunctions.
//!
//! ```
//! use ofpca::{fit, FitOptions, ObjectSample, ObjectTrajectory};
//!
//! let grid = vec![0.0, 0.5, 1.0];
//! let sample = ObjectSample::new(vec![
//!     ObjectTrajectory::from_scalars(grid.clone(), &[0.0, 1.0, 2.0]).unwrap(),
//!     ObjectTrajectory::from_scalars(grid.clone(), &[1.0, 1.0, 1.0]).unwrap(),
//!     ObjectTrajectory::from_scalars(grid, &[2.0, 0.5, 0.0]).unwrap(),
//! ])
//! .unwrap();
//! let fitted = fit(&sample, &FitOptions { components: 2, ..Default::default() }).unwrap();
//! assert_eq!(fitted.scores.len(), 3);
//! ```

pub mod cli;
pub mod eigen;
pub mod error;
pub mod fpca;
pub mod kernel;
mod linalg;
pub mod quadrature;
pub mod sim;
pub mod spaces;
pub mod text;

pub use eigen::{eigendecompose, eigendecompose_with, explained_fraction, EigenOptions, EigenSystem};
pub use error::{Error, Result};
pub use fpca::{fit, frechet_mean_trajectory, frechet_scores, object_fpc, FitOptions, FpcaFit};
pub use kernel::{
    estimate_cov_surface, metric_correlation, metric_covariance, metric_variance, KernelSurface,
    ObjectSample, ObjectTrajectory,
};
pub use spaces::{barycenter, distance, project, ObjectPoint, SpaceKind, SpaceTag};
