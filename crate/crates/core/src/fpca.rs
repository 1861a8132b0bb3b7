//! Fréchet means, object FPCs and Fréchet scores.

use rayon::prelude::*;

use crate::eigen::{components_for_fraction, eigendecompose_with, EigenOptions, EigenSystem};
use crate::error::{Error, Result};
use crate::kernel::{estimate_cov_surface, KernelSurface, ObjectSample, ObjectTrajectory};
use crate::quadrature::integrate;
use crate::spaces::{barycenter, distance, distance_sq, ObjectPoint};

/// Minimum `|∫φ|` for which `φ / ∫φ` is formed.
pub const MIN_EIGENFUNCTION_INTEGRAL: f64 = 1e-6;

/// Pointwise Fréchet mean of a sample; lives on the sample's grid and space.
pub type FrechetMeanTrajectory = ObjectTrajectory;

/// Sample Fréchet mean at every grid time (uniform-weight barycenter of the
/// time slice).
pub fn frechet_mean_trajectory(sample: &ObjectSample) -> Result<FrechetMeanTrajectory> {
    let n = sample.len();
    let weights = vec![1.0 / n as f64; n];
    let points = (0..sample.time_grid().len())
        .map(|t| barycenter(&sample.slice(t), &weights))
        .collect::<Result<Vec<_>>>()?;
    ObjectTrajectory::new(sample.space(), sample.time_grid().to_vec(), points)
}

/// `φ_k / ∫φ_k`, the weight function of the `k`-th object FPC (0-based).
pub fn normalize_eigenfunction(es: &EigenSystem, k: usize) -> Result<Vec<f64>> {
    let phi = es.eigenfunction(k);
    let integral = integrate(phi, es.quad_weights());
    if integral.abs() < MIN_EIGENFUNCTION_INTEGRAL {
        return Err(Error::NonIntegrableEigenfunction { component: k, integral });
    }
    Ok(phi.iter().map(|x| x / integral).collect())
}

/// Fréchet integral `argmin_ω Σ_k w_k φ*(t_k) d²(ω, X(t_k))`, solved as a
/// signed weighted barycenter of the trajectory's points.
pub fn object_fpc(traj: &ObjectTrajectory, phi_star: &[f64], quad_weights: &[f64]) -> Result<ObjectPoint> {
    let weights = riemann_weights(traj, phi_star, quad_weights)?;
    barycenter(traj.points(), &weights)
}

fn riemann_weights(traj: &ObjectTrajectory, phi_star: &[f64], quad_weights: &[f64]) -> Result<Vec<f64>> {
    if phi_star.len() != traj.len() || quad_weights.len() != traj.len() {
        return Err(Error::InvalidGrid(format!(
            "weight function of length {} for a trajectory of {} points",
            phi_star.len(),
            traj.len()
        )));
    }
    Ok(phi_star.iter().zip(quad_weights).map(|(p, w)| p * w).collect())
}

/// Riemann-sum objective `Σ_k d²(ω, X(t_k)) φ*(t_k) Δ_k`.
pub fn riemann_objective(
    traj: &ObjectTrajectory,
    phi_star: &[f64],
    quad_weights: &[f64],
    omega: &ObjectPoint,
) -> Result<f64> {
    let weights = riemann_weights(traj, phi_star, quad_weights)?;
    let mut total = 0.0;
    for (p, w) in traj.points().iter().zip(&weights) {
        total += w * distance_sq(omega, p)?;
    }
    Ok(total)
}

/// Minimizes the Riemann-sum objective over an explicit candidate set; the
/// first minimizer wins ties. Works for any metric, convex or not.
pub fn generic_riemann_integral(
    traj: &ObjectTrajectory,
    phi_star: &[f64],
    quad_weights: &[f64],
    candidates: &[ObjectPoint],
) -> Result<ObjectPoint> {
    let mut best: Option<(usize, f64)> = None;
    for (idx, cand) in candidates.iter().enumerate() {
        let obj = riemann_objective(traj, phi_star, quad_weights, cand)?;
        if best.is_none_or(|(_, b)| obj < b) {
            best = Some((idx, obj));
        }
    }
    best.map(|(idx, _)| candidates[idx].clone()).ok_or(Error::EmptyInput)
}

/// `D_i(t) = d(X_i(t), μ(t))` for every trajectory; `n × T`.
pub fn distance_curves(sample: &ObjectSample, mean: &FrechetMeanTrajectory) -> Result<Vec<Vec<f64>>> {
    curves_against(sample.trajectories(), mean)
}

fn curves_against(trajs: &[ObjectTrajectory], mean: &FrechetMeanTrajectory) -> Result<Vec<Vec<f64>>> {
    trajs
        .iter()
        .map(|tr| {
            if tr.time_grid() != mean.time_grid() {
                return Err(Error::InvalidGrid("trajectory and mean grids differ".into()));
            }
            tr.points()
                .iter()
                .zip(mean.points())
                .map(|(x, m)| distance(x, m))
                .collect()
        })
        .collect()
}

/// `β_ik = Σ_t w_t D_i(t) φ_k(t)`; `n × K`.
pub fn frechet_scores(
    sample: &ObjectSample,
    mean: &FrechetMeanTrajectory,
    es: &EigenSystem,
) -> Result<Vec<Vec<f64>>> {
    score_trajectories(sample.trajectories(), mean, es)
}

/// Scores of arbitrary trajectories (for instance new observations) against
/// a fitted mean and eigen system.
pub fn score_trajectories(
    trajs: &[ObjectTrajectory],
    mean: &FrechetMeanTrajectory,
    es: &EigenSystem,
) -> Result<Vec<Vec<f64>>> {
    if es.time_grid() != mean.time_grid() {
        return Err(Error::InvalidGrid("eigen system and mean grids differ".into()));
    }
    let curves = curves_against(trajs, mean)?;
    Ok(scores_from_curves(&curves, es))
}

fn scores_from_curves(curves: &[Vec<f64>], es: &EigenSystem) -> Vec<Vec<f64>> {
    let w = es.quad_weights();
    curves
        .iter()
        .map(|d| {
            es.eigenfunctions()
                .iter()
                .map(|phi| d.iter().zip(phi).zip(w).map(|((a, b), c)| a * b * c).sum())
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    /// Maximum number of components retained (capped at the grid size).
    pub components: usize,
    /// If set, keep the fewest leading components whose cumulative explained
    /// fraction reaches this value (still capped by `components`).
    pub explained_threshold: Option<f64>,
    pub clip_negative: bool,
    /// Compute object FPCs for every trajectory and component.
    pub object_fpcs: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { components: 4, explained_threshold: None, clip_negative: false, object_fpcs: false }
    }
}

/// Everything estimated from one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct FpcaFit {
    pub surface: KernelSurface,
    pub eigen: EigenSystem,
    pub mean: FrechetMeanTrajectory,
    pub scores: Vec<Vec<f64>>,
    pub distance_curves: Vec<Vec<f64>>,
    /// `object_fpcs[i][k]`, `None` where `φ_k` is not integrable.
    pub object_fpcs: Option<Vec<Vec<Option<ObjectPoint>>>>,
    pub warnings: Vec<String>,
}

impl FpcaFit {
    /// Fréchet mean of each component's object FPCs across trajectories.
    /// A display summary only.
    pub fn fpc_column_means(&self) -> Result<Vec<Option<ObjectPoint>>> {
        let Some(fpcs) = &self.object_fpcs else {
            return Ok(Vec::new());
        };
        (0..self.eigen.num_retained())
            .map(|k| {
                let column: Vec<ObjectPoint> = fpcs.iter().filter_map(|row| row[k].clone()).collect();
                if column.is_empty() {
                    return Ok(None);
                }
                let w = vec![1.0 / column.len() as f64; column.len()];
                barycenter(&column, &w).map(Some)
            })
            .collect()
    }
}

/// Surface → eigen system → mean → scores (→ object FPCs).
pub fn fit(sample: &ObjectSample, opts: &FitOptions) -> Result<FpcaFit> {
    let surface = estimate_cov_surface(sample)?;
    let k = opts.components.min(surface.grid_len());
    let mut eigen = eigendecompose_with(&surface, k, EigenOptions { clip_negative: opts.clip_negative })?;
    let mut warnings = Vec::new();
    if let Some(threshold) = opts.explained_threshold {
        let k = components_for_fraction(&eigen, threshold)?;
        eigen.truncate(k);
    }
    let negative = (0..eigen.num_retained()).filter(|&k| eigen.is_negative(k)).count();
    if negative > 0 {
        warnings.push(format!(
            "{negative} retained eigenvalue(s) are negative{}",
            if opts.clip_negative { " and were clipped to 0" } else { "" }
        ));
    }

    let mean = frechet_mean_trajectory(sample)?;
    let curves = distance_curves(sample, &mean)?;
    let scores = scores_from_curves(&curves, &eigen);

    let object_fpcs = if opts.object_fpcs {
        let mut phi_stars = Vec::with_capacity(eigen.num_retained());
        for k in 0..eigen.num_retained() {
            match normalize_eigenfunction(&eigen, k) {
                Ok(p) => phi_stars.push(Some(p)),
                Err(e) => {
                    warnings.push(format!("object FPC {} skipped: {e}", k + 1));
                    phi_stars.push(None);
                }
            }
        }
        let w = eigen.quad_weights();
        let rows = sample
            .trajectories()
            .par_iter()
            .map(|tr| {
                phi_stars
                    .iter()
                    .map(|p| p.as_ref().map(|p| object_fpc(tr, p, w)).transpose())
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Some(rows)
    } else {
        None
    };

    Ok(FpcaFit { surface, eigen, mean, scores, distance_curves: curves, object_fpcs, warnings })
}
