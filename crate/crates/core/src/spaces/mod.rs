//! Metric spaces for curve values.
//!
//! Every space here is a closed convex subset of a Euclidean coordinate
//! space whose metric is a (weighted) L² norm on the coordinates:
//!
//! * `Quantile(m)`: quantile functions sampled at the interior levels
//!   `u_k = (k - 0.5) / m`; the discrete 2-Wasserstein distance is
//!   `sqrt((1/m) Σ_k (Q_a(u_k) - Q_b(u_k))²)`, an O(1/m) approximation of the
//!   integral over (0, 1).
//! * `Adjacency(r)`: symmetric `r × r` weighted adjacency matrices with zero
//!   diagonal and entries in [0, 1], Frobenius metric.
//! * `SymPsd(r)`: symmetric positive semidefinite `r × r` matrices, Frobenius
//!   metric.
//! * `Scalar`: the real line.
//!
//! Weighted Fréchet barycenters (including signed weights summing to one) are
//! therefore the metric projection of the coordinatewise weighted average.

mod pava;

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::symmetric_eigen;

pub use pava::{is_non_decreasing, pava};

/// Tolerance on the smallest eigenvalue of an admitted PSD matrix.
pub const PSD_EPS: f64 = 1e-10;
/// Relative eigenvalue slack treated as zero by the PSD projection.
pub const PSD_ROUNDOFF: f64 = 1e-13;

/// Tolerance on `|Σ w - 1|` for barycenter weights.
pub const WEIGHT_SUM_TOL: f64 = 1e-10;

const SYMMETRY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceTag {
    Scalar,
    Quantile,
    Adjacency,
    #[serde(rename = "sympsd")]
    SymPsd,
}

impl fmt::Display for SpaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SpaceTag::Scalar => "scalar",
            SpaceTag::Quantile => "quantile",
            SpaceTag::Adjacency => "adjacency",
            SpaceTag::SymPsd => "sympsd",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for SpaceTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "scalar" => Ok(SpaceTag::Scalar),
            "quantile" => Ok(SpaceTag::Quantile),
            "adjacency" => Ok(SpaceTag::Adjacency),
            "sympsd" => Ok(SpaceTag::SymPsd),
            other => Err(Error::InvalidObject(format!("unknown space '{other}'"))),
        }
    }
}

/// A space together with its size: the quantile grid size `m`, or the matrix
/// side `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpaceKind {
    tag: SpaceTag,
    dim: usize,
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.tag, self.dim)
    }
}

impl SpaceKind {
    pub fn new(tag: SpaceTag, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidObject(format!("{tag} space needs dim >= 1")));
        }
        if tag == SpaceTag::Scalar && dim != 1 {
            return Err(Error::InvalidObject(format!(
                "scalar space has dim 1, got {dim}"
            )));
        }
        Ok(SpaceKind { tag, dim })
    }

    pub fn scalar() -> Self {
        SpaceKind { tag: SpaceTag::Scalar, dim: 1 }
    }

    /// Panics if `m == 0`.
    pub fn quantile(m: usize) -> Self {
        Self::new(SpaceTag::Quantile, m).expect("quantile grid size must be positive")
    }

    /// Panics if `r == 0`.
    pub fn adjacency(r: usize) -> Self {
        Self::new(SpaceTag::Adjacency, r).expect("matrix side must be positive")
    }

    /// Panics if `r == 0`.
    pub fn sym_psd(r: usize) -> Self {
        Self::new(SpaceTag::SymPsd, r).expect("matrix side must be positive")
    }

    pub fn tag(&self) -> SpaceTag {
        self.tag
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored coordinates per object.
    pub fn data_len(&self) -> usize {
        match self.tag {
            SpaceTag::Scalar | SpaceTag::Quantile => self.dim,
            SpaceTag::Adjacency | SpaceTag::SymPsd => self.dim * self.dim,
        }
    }

    /// Scale turning stored coordinates into isometric Euclidean coordinates,
    /// so that `d(a, b) = scale · ‖a - b‖₂`.
    pub fn coordinate_scale(&self) -> f64 {
        match self.tag {
            SpaceTag::Quantile => (1.0 / self.dim as f64).sqrt(),
            _ => 1.0,
        }
    }

    /// Squared distance between two raw coordinate vectors of this space.
    pub fn distance_sq_raw(&self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), b.len());
        let ss: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
        match self.tag {
            SpaceTag::Quantile => ss / self.dim as f64,
            _ => ss,
        }
    }

    /// Interior quantile levels `(k - 0.5) / m`, `k = 1..=m`.
    pub fn quantile_levels(m: usize) -> Vec<f64> {
        (1..=m).map(|k| (k as f64 - 0.5) / m as f64).collect()
    }

    fn check_len(&self, data: &[f64]) -> Result<()> {
        if data.len() != self.data_len() {
            return Err(Error::InvalidObject(format!(
                "{self} expects {} values, got {}",
                self.data_len(),
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidObject(format!(
                "non-finite value at position {pos}"
            )));
        }
        Ok(())
    }

    /// Validates `data` against the space constraints. Matrices within
    /// tolerance of the constraint set are repaired (symmetrized, PSD
    /// re-projected) and returned.
    fn admit(&self, mut data: Vec<f64>) -> Result<Vec<f64>> {
        self.check_len(&data)?;
        match self.tag {
            SpaceTag::Scalar => {}
            SpaceTag::Quantile => {
                if let Some(k) = data.windows(2).position(|w| w[0] > w[1]) {
                    return Err(Error::InvalidObject(format!(
                        "quantile vector decreases at index {}",
                        k + 1
                    )));
                }
            }
            SpaceTag::Adjacency => {
                let r = self.dim;
                check_symmetric(&data, r)?;
                symmetrize_in_place(&mut data, r);
                for i in 0..r {
                    if data[i * r + i] != 0.0 {
                        return Err(Error::InvalidObject(format!(
                            "adjacency diagonal entry ({i},{i}) is nonzero"
                        )));
                    }
                }
                if let Some(pos) = data.iter().position(|&v| !(0.0..=1.0).contains(&v)) {
                    return Err(Error::InvalidObject(format!(
                        "adjacency entry ({}, {}) = {} outside [0, 1]",
                        pos / r,
                        pos % r,
                        data[pos]
                    )));
                }
            }
            SpaceTag::SymPsd => {
                let r = self.dim;
                check_symmetric(&data, r)?;
                symmetrize_in_place(&mut data, r);
                let eig = symmetric_eigen(DMatrix::from_row_slice(r, r, &data));
                let min = eig.eigenvalues.min();
                if min < -PSD_EPS {
                    return Err(Error::InvalidObject(format!(
                        "matrix has eigenvalue {min:e} below -{PSD_EPS:e}"
                    )));
                }
                if min < 0.0 {
                    data = project_psd(&data, r);
                }
            }
        }
        Ok(data)
    }

    /// Metric projection of `raw` onto this space's constraint set.
    pub fn project_raw(&self, raw: &[f64]) -> Result<Vec<f64>> {
        self.check_len(raw)?;
        Ok(match self.tag {
            SpaceTag::Scalar => raw.to_vec(),
            SpaceTag::Quantile => pava(raw),
            SpaceTag::Adjacency => {
                let r = self.dim;
                let mut out = raw.to_vec();
                symmetrize_in_place(&mut out, r);
                for i in 0..r {
                    out[i * r + i] = 0.0;
                }
                for v in &mut out {
                    *v = v.clamp(0.0, 1.0);
                }
                out
            }
            SpaceTag::SymPsd => {
                let mut sym = raw.to_vec();
                symmetrize_in_place(&mut sym, self.dim);
                project_psd(&sym, self.dim)
            }
        })
    }
}

fn check_symmetric(data: &[f64], r: usize) -> Result<()> {
    let scale = data.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    for i in 0..r {
        for j in (i + 1)..r {
            if (data[i * r + j] - data[j * r + i]).abs() > SYMMETRY_TOL * scale {
                return Err(Error::InvalidObject(format!(
                    "matrix not symmetric at ({i}, {j})"
                )));
            }
        }
    }
    Ok(())
}

fn symmetrize_in_place(data: &mut [f64], r: usize) {
    for i in 0..r {
        for j in (i + 1)..r {
            let avg = 0.5 * (data[i * r + j] + data[j * r + i]);
            data[i * r + j] = avg;
            data[j * r + i] = avg;
        }
    }
}

/// Frobenius projection of a symmetric matrix onto the PSD cone: clamp the
/// eigenvalues at zero. Whichever spectral part is smaller passes through
/// the eigenvectors: `S - V min(Λ, 0) Vᵀ` when the negative part is small,
/// `V max(Λ, 0) Vᵀ` otherwise, which keeps cancellation error down. A matrix
/// that is already PSD comes back bit-for-bit.
fn project_psd(sym: &[f64], r: usize) -> Vec<f64> {
    let eig = symmetric_eigen(DMatrix::from_row_slice(r, r, sym));
    // Eigenvalues within solver roundoff of zero count as nonnegative, so a
    // projected matrix comes back unchanged when projected again.
    let roundoff = PSD_ROUNDOFF * eig.eigenvalues.amax().max(1.0);
    if eig.eigenvalues.iter().all(|&l| l >= -roundoff) {
        return sym.to_vec();
    }
    let negative_mass: f64 = eig.eigenvalues.iter().filter(|&&l| l < 0.0).map(|l| -l).sum();
    let positive_mass: f64 = eig.eigenvalues.iter().filter(|&&l| l > 0.0).sum();
    let rebuild = |part: DVector<f64>| &eig.eigenvectors * DMatrix::from_diagonal(&part) * eig.eigenvectors.transpose();
    let mut out = if negative_mass <= positive_mass {
        let m = rebuild(eig.eigenvalues.map(|l| l.min(0.0)));
        let mut out = sym.to_vec();
        for i in 0..r {
            for j in 0..r {
                out[i * r + j] -= m[(i, j)];
            }
        }
        out
    } else {
        let m = rebuild(eig.eigenvalues.map(|l| l.max(0.0)));
        (0..r * r).map(|k| m[(k / r, k % r)]).collect()
    };
    symmetrize_in_place(&mut out, r);
    out
}

/// One element of a metric space.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectPoint {
    space: SpaceKind,
    data: Vec<f64>,
}

impl ObjectPoint {
    /// Builds a point, enforcing the space constraints.
    pub fn new(space: SpaceKind, data: Vec<f64>) -> Result<Self> {
        let data = space.admit(data)?;
        Ok(ObjectPoint { space, data })
    }

    pub fn scalar(value: f64) -> Result<Self> {
        Self::new(SpaceKind::scalar(), vec![value])
    }

    pub fn space(&self) -> SpaceKind {
        self.space
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    /// Matrix view for `Adjacency` / `SymPsd` points.
    pub fn as_matrix(&self) -> Option<DMatrix<f64>> {
        match self.space.tag {
            SpaceTag::Adjacency | SpaceTag::SymPsd => {
                let r = self.space.dim;
                Some(DMatrix::from_row_slice(r, r, &self.data))
            }
            _ => None,
        }
    }
}

fn same_space(a: SpaceKind, b: SpaceKind) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::SpaceMismatch { left: a, right: b })
    }
}

pub fn distance_sq(a: &ObjectPoint, b: &ObjectPoint) -> Result<f64> {
    same_space(a.space, b.space)?;
    Ok(a.space.distance_sq_raw(&a.data, &b.data))
}

pub fn distance(a: &ObjectPoint, b: &ObjectPoint) -> Result<f64> {
    distance_sq(a, b).map(f64::sqrt)
}

/// Metric projection of a raw coordinate vector onto `space`. Idempotent.
pub fn project(space: SpaceKind, raw: &[f64]) -> Result<ObjectPoint> {
    let data = space.project_raw(raw)?;
    Ok(ObjectPoint { space, data })
}

/// Points and weights (summing to one, possibly signed) defining
/// `argmin_ω Σ_j w_j d²(ω, x_j)`.
#[derive(Debug, Clone, Copy)]
pub struct WeightedBarycenterProblem<'a> {
    points: &'a [ObjectPoint],
    weights: &'a [f64],
}

impl<'a> WeightedBarycenterProblem<'a> {
    pub fn new(points: &'a [ObjectPoint], weights: &'a [f64]) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyInput)?;
        if weights.len() != points.len() {
            return Err(Error::InvalidObject(format!(
                "{} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        for p in points {
            same_space(first.space, p.space)?;
        }
        let sum: f64 = weights.iter().sum();
        if !sum.is_finite() || (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::BadWeights { sum });
        }
        Ok(WeightedBarycenterProblem { points, weights })
    }

    pub fn space(&self) -> SpaceKind {
        self.points[0].space
    }

    pub fn points(&self) -> &[ObjectPoint] {
        self.points
    }

    pub fn weights(&self) -> &[f64] {
        self.weights
    }

    /// `Σ_j w_j d²(ω, x_j)`.
    pub fn objective(&self, omega: &ObjectPoint) -> Result<f64> {
        let mut total = 0.0;
        for (p, w) in self.points.iter().zip(self.weights) {
            total += w * distance_sq(omega, p)?;
        }
        Ok(total)
    }

    /// Unconstrained minimizer `Σ_j w_j x_j` in coordinates.
    pub fn euclidean_average(&self) -> Vec<f64> {
        let mut avg = vec![0.0; self.space().data_len()];
        for (p, &w) in self.points.iter().zip(self.weights) {
            for (a, x) in avg.iter_mut().zip(&p.data) {
                *a += w * x;
            }
        }
        avg
    }
}

/// Weighted Fréchet barycenter. Because `Σ w_j = 1 > 0`, the objective is
/// `‖ω - A‖² + const` with `A` the weighted average, so the constrained
/// minimizer is the projection of `A`. When every point coincides the
/// answer is that point, returned exactly rather than re-averaged.
pub fn weighted_barycenter(problem: &WeightedBarycenterProblem<'_>) -> Result<ObjectPoint> {
    let first = &problem.points[0];
    if problem.points.iter().all(|p| p.data == first.data) {
        return Ok(first.clone());
    }
    project(problem.space(), &problem.euclidean_average())
}

/// Shorthand for building and solving a [`WeightedBarycenterProblem`].
pub fn barycenter(points: &[ObjectPoint], weights: &[f64]) -> Result<ObjectPoint> {
    weighted_barycenter(&WeightedBarycenterProblem::new(points, weights)?)
}
