//! Eigendecomposition of kernel surfaces as integral operators.
//!
//! The operator `(T g)(s) = ∫ C(s,t) g(t) dt` is discretized with the
//! surface's trapezoid weights `W` (Nyström). The symmetric matrix
//! `W^½ C W^½` shares its eigenvalues with the discretized operator, and an
//! eigenvector `v` maps to the eigenfunction `φ = W^-½ v`, which is
//! orthonormal under the same quadrature.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::kernel::KernelSurface;
use crate::linalg::symmetric_eigen;
use crate::quadrature::{integrate, inner};

const SIGN_EPS: f64 = 1e-9;
/// Relative size below which a negative eigenvalue counts as zero.
const NEGATIVE_RTOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EigenOptions {
    /// Zero out negative retained eigenvalues.
    pub clip_negative: bool,
}

/// Leading eigenpairs of a kernel surface.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    eigenvalues: Vec<f64>,
    spectrum: Vec<f64>,
    eigenfunctions: Vec<Vec<f64>>,
    time_grid: Vec<f64>,
    quad_weights: Vec<f64>,
    clipped: bool,
}

impl EigenSystem {
    /// Assembles a system from precomputed parts (used when loading saved
    /// fits). `spectrum` is the full descending raw spectrum.
    pub fn from_parts(
        eigenvalues: Vec<f64>,
        spectrum: Vec<f64>,
        eigenfunctions: Vec<Vec<f64>>,
        time_grid: Vec<f64>,
        quad_weights: Vec<f64>,
        clipped: bool,
    ) -> Result<Self> {
        let t = time_grid.len();
        if eigenvalues.len() != eigenfunctions.len()
            || quad_weights.len() != t
            || eigenfunctions.iter().any(|f| f.len() != t)
            || spectrum.len() < eigenvalues.len()
        {
            return Err(Error::InvalidSurface("inconsistent eigen system shapes".into()));
        }
        Ok(EigenSystem { eigenvalues, spectrum, eigenfunctions, time_grid, quad_weights, clipped })
    }

    /// Retained eigenvalues, descending; zeroed where negative if clipping
    /// was requested.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// All `T` raw eigenvalues of the discretized operator, descending.
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    pub fn eigenfunctions(&self) -> &[Vec<f64>] {
        &self.eigenfunctions
    }

    pub fn eigenfunction(&self, k: usize) -> &[f64] {
        &self.eigenfunctions[k]
    }

    pub fn time_grid(&self) -> &[f64] {
        &self.time_grid
    }

    pub fn quad_weights(&self) -> &[f64] {
        &self.quad_weights
    }

    pub fn num_retained(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn clipped(&self) -> bool {
        self.clipped
    }

    /// Number of negative eigenvalues in the raw spectrum.
    pub fn negative_count(&self) -> usize {
        let tol = self.negativity_tolerance();
        self.spectrum.iter().filter(|&&l| l < -tol).count()
    }

    /// Whether retained component `k` had a negative raw eigenvalue.
    pub fn is_negative(&self, k: usize) -> bool {
        self.spectrum[k] < -self.negativity_tolerance()
    }

    /// Eigenvalues above `-tol` are treated as rounding noise around zero.
    fn negativity_tolerance(&self) -> f64 {
        let scale = self.spectrum.iter().fold(0.0f64, |m, l| m.max(l.abs()));
        NEGATIVE_RTOL * scale
    }

    /// `Σ_j λ_j φ_j(s) φ_j(t)` over retained components with nonnegative
    /// eigenvalues.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let t = self.time_grid.len();
        let mut out = DMatrix::<f64>::zeros(t, t);
        for (k, phi) in self.eigenfunctions.iter().enumerate() {
            let lambda = self.spectrum[k];
            if lambda < 0.0 {
                continue;
            }
            for u in 0..t {
                for s in 0..t {
                    out[(s, u)] += lambda * phi[s] * phi[u];
                }
            }
        }
        out
    }
}

pub fn eigendecompose(surface: &KernelSurface, k: usize) -> Result<EigenSystem> {
    eigendecompose_with(surface, k, EigenOptions::default())
}

pub fn eigendecompose_with(surface: &KernelSurface, k: usize, opts: EigenOptions) -> Result<EigenSystem> {
    let t = surface.grid_len();
    if k == 0 || k > t {
        return Err(Error::BadRank { k, grid: t });
    }
    // KernelSurface guarantees exact symmetry.
    let values = surface.values();
    let w = surface.quad_weights();
    let sqrt_w: Vec<f64> = w.iter().map(|x| x.sqrt()).collect();
    let b = DMatrix::from_fn(t, t, |s, u| sqrt_w[s] * values[(s, u)] * sqrt_w[u]);
    let eig = symmetric_eigen(b);

    let mut order: Vec<usize> = (0..t).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let spectrum: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();

    let eigenfunctions: Vec<Vec<f64>> = order[..k]
        .iter()
        .map(|&col| {
            let v = eig.eigenvectors.column(col);
            let mut phi: Vec<f64> = (0..t).map(|s| v[s] / sqrt_w[s]).collect();
            let norm = inner(&phi, &phi, w).sqrt();
            if norm > 0.0 {
                phi.iter_mut().for_each(|x| *x /= norm);
            }
            apply_sign_convention(&mut phi, w);
            phi
        })
        .collect();

    let eigenvalues = spectrum[..k]
        .iter()
        .map(|&l| if opts.clip_negative { l.max(0.0) } else { l })
        .collect();

    Ok(EigenSystem {
        eigenvalues,
        spectrum,
        eigenfunctions,
        time_grid: surface.time_grid().to_vec(),
        quad_weights: w.to_vec(),
        clipped: opts.clip_negative,
    })
}

/// `∫φ ≥ 0`; when the integral is within `1e-9` of zero, the first entry
/// larger than `1e-9` in magnitude is made positive.
fn apply_sign_convention(phi: &mut [f64], w: &[f64]) {
    let integral = integrate(phi, w);
    let flip = if integral.abs() >= SIGN_EPS {
        integral < 0.0
    } else {
        phi.iter().find(|x| x.abs() > SIGN_EPS).is_some_and(|&x| x < 0.0)
    };
    if flip {
        phi.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Fraction of total (clipped) variance carried by component `j`
/// (0-based).
pub fn explained_fraction(es: &EigenSystem, j: usize) -> Result<f64> {
    if j >= es.num_retained() {
        return Err(Error::BadRank { k: j + 1, grid: es.num_retained() });
    }
    let total: f64 = es.spectrum.iter().map(|l| l.max(0.0)).sum();
    if total <= 0.0 {
        return Err(Error::DegenerateSpectrum);
    }
    Ok(es.spectrum[j].max(0.0) / total)
}

/// Smallest number of leading components whose cumulative explained
/// fraction reaches `threshold`, capped at the number retained.
pub fn components_for_fraction(es: &EigenSystem, threshold: f64) -> Result<usize> {
    let mut cum = 0.0;
    for j in 0..es.num_retained() {
        cum += explained_fraction(es, j)?;
        if cum >= threshold {
            return Ok(j + 1);
        }
    }
    Ok(es.num_retained())
}

impl EigenSystem {
    /// Keeps only the first `k` components.
    pub fn truncate(&mut self, k: usize) {
        self.eigenvalues.truncate(k);
        self.eigenfunctions.truncate(k);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{orthonormalize, trapezoid_weights, uniform_grid, weighted_frobenius};
    use crate::sim::dist_basis;

    fn unit(f: impl Fn(f64) -> f64, grid: &[f64]) -> Vec<f64> {
        let w = trapezoid_weights(grid);
        let v: Vec<f64> = grid.iter().map(|&t| f(t)).collect();
        let n = inner(&v, &v, &w).sqrt();
        v.into_iter().map(|x| x / n).collect()
    }

    fn surface_from(grid: &[f64], comps: &[(f64, Vec<f64>)]) -> KernelSurface {
        let t = grid.len();
        let mut m = DMatrix::zeros(t, t);
        for (l, phi) in comps {
            for s in 0..t {
                for u in 0..t {
                    m[(s, u)] += l * phi[s] * phi[u];
                }
            }
        }
        for s in 0..t {
            for u in (s + 1)..t {
                m[(u, s)] = m[(s, u)];
            }
        }
        KernelSurface::new(grid.to_vec(), m).unwrap()
    }

    #[test]
    fn rank_one_recovery() {
        let grid = uniform_grid(41);
        let w = trapezoid_weights(&grid);
        let phi = unit(|t| 1.0 + (3.0 * t).sin(), &grid);
        let es = eigendecompose(&surface_from(&grid, &[(12.0, phi.clone())]), 2).unwrap();
        assert!((es.eigenvalues()[0] - 12.0).abs() < 1e-8);
        let diff: Vec<f64> = es.eigenfunction(0).iter().zip(&phi).map(|(a, b)| a - b).collect();
        assert!(inner(&diff, &diff, &w) < 1e-8);
    }

    #[test]
    fn zero_surface_has_zero_spectrum() {
        let grid = uniform_grid(9);
        let s = KernelSurface::new(grid, DMatrix::zeros(9, 9)).unwrap();
        let es = eigendecompose(&s, 3).unwrap();
        assert!(es.spectrum().iter().all(|l| l.abs() < 1e-15));
        assert_eq!(explained_fraction(&es, 0).unwrap_err(), Error::DegenerateSpectrum);
    }

    #[test]
    fn three_component_polynomial_surface() {
        let grid = uniform_grid(101);
        let w = trapezoid_weights(&grid);
        let raw: Vec<Vec<f64>> = (0..3)
            .map(|j| grid.iter().map(|&t| dist_basis(t)[j]).collect())
            .collect();
        let phis = orthonormalize(raw.clone(), &w);
        let lambdas = [12.0, 6.0, 1.75];
        let comps: Vec<_> = lambdas.iter().copied().zip(phis).collect();
        let es = eigendecompose(&surface_from(&grid, &comps), 3).unwrap();
        for (got, want) in es.eigenvalues().iter().zip(lambdas) {
            assert!((got - want).abs() < 1e-6, "{got} vs {want}");
        }

        // With the rounded closed-form polynomials used directly, the
        // trapezoid rule on 101 points perturbs the spectrum at the 1e-3
        // level (quadrature error O(h²) plus 4-digit coefficients).
        let comps: Vec<_> = lambdas.iter().copied().zip(raw).collect();
        let es = eigendecompose(&surface_from(&grid, &comps), 3).unwrap();
        for (got, want) in es.eigenvalues().iter().zip(lambdas) {
            assert!((got - want).abs() / want < 5e-3, "{got} vs {want}");
        }
    }

    #[test]
    fn orthonormal_and_signed() {
        let grid: Vec<f64> = (0..30).map(|k| (k as f64 / 29.0).powf(1.3)).collect();
        let w = trapezoid_weights(&grid);
        let s = KernelSurface::from_fn(grid.clone(), |a, b| (-(a - b).abs() / 0.3).exp()).unwrap();
        let es = eigendecompose(&s, 6).unwrap();
        for a in 0..6 {
            assert!(integrate(es.eigenfunction(a), &w) >= 0.0);
            for b in 0..6 {
                let ip = inner(es.eigenfunction(a), es.eigenfunction(b), &w);
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((ip - want).abs() < 1e-8);
            }
        }
        assert!(es.eigenvalues().windows(2).all(|p| p[0] >= p[1]));
    }

    #[test]
    fn reconstruction_error_bound() {
        let grid = uniform_grid(25);
        let w = trapezoid_weights(&grid);
        let s = KernelSurface::from_fn(grid, |a, b| a.min(b) - a * b + 0.3 * (a * b).cos()).unwrap();
        let es = eigendecompose(&s, 4).unwrap();
        let err = weighted_frobenius(&(s.values() - es.reconstruct()), &w);
        let dropped: f64 = es.spectrum()[4..].iter().map(|l| l.abs()).sum();
        assert!(err <= dropped + 1e-8);
    }

    #[test]
    fn negative_eigenvalues_and_clipping() {
        let grid = uniform_grid(21);
        let a = unit(|_| 1.0, &grid);
        let b = unit(|t| t - 0.5, &grid);
        let s = surface_from(&grid, &[(3.0, a), (-1.0, b)]);
        let raw = eigendecompose(&s, 21).unwrap();
        assert!((raw.eigenvalues()[20] + 1.0).abs() < 1e-10);
        assert_eq!(raw.negative_count(), 1);
        assert!((explained_fraction(&raw, 0).unwrap() - 1.0).abs() < 1e-12);
        let clipped = eigendecompose_with(&s, 21, EigenOptions { clip_negative: true }).unwrap();
        assert_eq!(clipped.eigenvalues()[20], 0.0);
        assert!(clipped.spectrum()[20] < 0.0);
    }

    #[test]
    fn explained_fraction_of_distribution_design_spectrum() {
        let grid = uniform_grid(3);
        let es = EigenSystem::from_parts(
            vec![12.0, 6.0, 1.75],
            vec![12.0, 6.0, 1.75],
            vec![vec![0.0; 3]; 3],
            grid.clone(),
            trapezoid_weights(&grid),
            false,
        )
        .unwrap();
        assert!((explained_fraction(&es, 0).unwrap() - 12.0 / 19.75).abs() < 1e-15);
        assert_eq!(components_for_fraction(&es, 0.9).unwrap(), 2);
    }

    #[test]
    fn rank_errors() {
        let grid = uniform_grid(4);
        let s = KernelSurface::new(grid, DMatrix::identity(4, 4)).unwrap();
        assert!(matches!(eigendecompose(&s, 5), Err(Error::BadRank { .. })));
        assert!(matches!(eigendecompose(&s, 0), Err(Error::BadRank { .. })));
    }
}
