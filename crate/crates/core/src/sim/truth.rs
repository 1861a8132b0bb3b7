use nalgebra::DMatrix;

use super::basis::{dist_basis, jacobi_basis};
use super::{Design, COMMUNITY_SIZE};
use crate::error::Result;
use crate::kernel::{check_grid, KernelSurface};
use crate::quadrature::{orthonormalize, trapezoid_weights};

/// Midpoint nodes per coordinate used for the network population surface.
pub const NETWORK_ORACLE_RESOLUTION: usize = 400;

/// Population eigenstructure of a simulation design on a fixed grid.
///
/// Eigenfunctions are the design's closed-form bases evaluated on the grid
/// and re-orthonormalized under the grid's trapezoid rule, so the truth is
/// exactly orthonormal in the same inner product the estimator uses. The
/// surface is `Σ λ_j φ_j(s) φ_j(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruthSpec {
    time_grid: Vec<f64>,
    quad_weights: Vec<f64>,
    eigenvalues: Vec<f64>,
    eigenfunctions: Vec<Vec<f64>>,
}

impl TruthSpec {
    /// Gaussian-distribution design: `λ = (12, 6, 1.75)`.
    pub fn distributions(grid: &[f64]) -> Result<Self> {
        let phis = grid_basis(grid, |j, t| dist_basis(t)[j])?;
        Ok(Self::assemble(grid, vec![12.0, 6.0, 1.75], phis))
    }

    /// Two-community network design. Eigenvalues are Rayleigh quotients of
    /// the population surface (which includes the effect of clamping edge
    /// weights to [0, 1]) on the orthonormalized Jacobi bases.
    pub fn networks(grid: &[f64]) -> Result<Self> {
        let phis = grid_basis(grid, |j, t| jacobi_basis(j + 1, t))?;
        let pop = network_population_surface(grid, NETWORK_ORACLE_RESOLUTION)?;
        let w = pop.quad_weights();
        let lambdas = phis.iter().map(|phi| rayleigh(pop.values(), phi, w)).collect();
        Ok(Self::assemble(grid, lambdas, phis))
    }

    pub fn for_design(design: Design, grid: &[f64]) -> Result<Self> {
        match design {
            Design::Distributions => Self::distributions(grid),
            Design::Networks => Self::networks(grid),
        }
    }

    fn assemble(grid: &[f64], eigenvalues: Vec<f64>, eigenfunctions: Vec<Vec<f64>>) -> Self {
        TruthSpec {
            time_grid: grid.to_vec(),
            quad_weights: trapezoid_weights(grid),
            eigenvalues,
            eigenfunctions,
        }
    }

    pub fn time_grid(&self) -> &[f64] {
        &self.time_grid
    }

    pub fn quad_weights(&self) -> &[f64] {
        &self.quad_weights
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenfunctions(&self) -> &[Vec<f64>] {
        &self.eigenfunctions
    }

    pub fn surface(&self) -> Result<KernelSurface> {
        let t = self.time_grid.len();
        let mut values = DMatrix::zeros(t, t);
        for (lam, phi) in self.eigenvalues.iter().zip(&self.eigenfunctions) {
            for b in 0..t {
                for a in 0..t {
                    values[(a, b)] += lam * phi[a] * phi[b];
                }
            }
        }
        KernelSurface::new(self.time_grid.clone(), values)
    }
}

/// `∫∫ φ(s) C(s,t) φ(t) ds dt` under the tensor trapezoid rule.
fn rayleigh(c: &DMatrix<f64>, phi: &[f64], w: &[f64]) -> f64 {
    let wphi: Vec<f64> = phi.iter().zip(w).map(|(p, w)| p * w).collect();
    let mut total = 0.0;
    for (b, &y) in wphi.iter().enumerate() {
        for (a, &x) in wphi.iter().enumerate() {
            total += x * c[(a, b)] * y;
        }
    }
    total
}

fn grid_basis(grid: &[f64], f: impl Fn(usize, f64) -> f64) -> Result<Vec<Vec<f64>>> {
    check_grid(grid)?;
    let raw = (0..3).map(|j| grid.iter().map(|&t| f(j, t)).collect()).collect();
    Ok(orthonormalize(raw, &trapezoid_weights(grid)))
}

/// Population metric auto-covariance of the network design, by tensor
/// midpoint quadrature over the uniform coefficients (`resolution` nodes per
/// coordinate), with edge weights clamped to [0, 1] exactly as simulated.
///
/// Community 1 depends only on `(U, V)` and community 2 only on `(W, Z)`,
/// so each contributes `20 · Cov(p(s), p(t))` (ordered off-diagonal pairs
/// within a block of five). Cross-community weights are constant.
pub fn network_population_surface(grid: &[f64], resolution: usize) -> Result<KernelSurface> {
    check_grid(grid)?;
    let t = grid.len();
    let f1: Vec<f64> = grid.iter().map(|&s| jacobi_basis(1, s)).collect();
    let f2: Vec<f64> = grid.iter().map(|&s| jacobi_basis(2, s)).collect();
    let f3: Vec<f64> = grid.iter().map(|&s| jacobi_basis(3, s)).collect();
    let pairs = (COMMUNITY_SIZE * (COMMUNITY_SIZE - 1)) as f64;
    let mut values = block_covariance(0.4, &f1, 0.1, &f3, resolution);
    values += block_covariance(0.3, &f2, 0.1, &f3, resolution);
    values *= pairs;
    debug_assert_eq!(values.nrows(), t);
    KernelSurface::new(grid.to_vec(), values)
}

/// `Cov(p(s), p(t))` for `p = clamp(0.5 + A fa + B fb)`, `A ~ Unif(0, a)`,
/// `B ~ Unif(0, b)`.
fn block_covariance(a: f64, fa: &[f64], b: f64, fb: &[f64], resolution: usize) -> DMatrix<f64> {
    let t = fa.len();
    let nodes: Vec<f64> = (0..resolution).map(|k| (k as f64 + 0.5) / resolution as f64).collect();
    let mut sum = vec![0.0; t];
    let mut prod = DMatrix::<f64>::zeros(t, t);
    let mut p = vec![0.0; t];
    for &x in &nodes {
        for &y in &nodes {
            for k in 0..t {
                p[k] = (0.5 + a * x * fa[k] + b * y * fb[k]).clamp(0.0, 1.0);
                sum[k] += p[k];
            }
            for c in 0..t {
                for r in 0..=c {
                    prod[(r, c)] += p[r] * p[c];
                }
            }
        }
    }
    let count = (resolution * resolution) as f64;
    for c in 0..t {
        for r in 0..=c {
            let v = prod[(r, c)] / count - sum[r] * sum[c] / (count * count);
            prod[(r, c)] = v;
            prod[(c, r)] = v;
        }
    }
    prod
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{inner, uniform_grid};

    fn check_orthonormal(truth: &TruthSpec) {
        let w = truth.quad_weights();
        for (i, a) in truth.eigenfunctions().iter().enumerate() {
            for (j, b) in truth.eigenfunctions().iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((inner(a, b, w) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn distribution_truth_is_orthonormal() {
        let truth = TruthSpec::distributions(&uniform_grid(51)).unwrap();
        check_orthonormal(&truth);
        assert_eq!(truth.eigenvalues(), &[12.0, 6.0, 1.75]);
    }

    #[test]
    fn network_truth_eigenvalues() {
        let truth = TruthSpec::networks(&uniform_grid(51)).unwrap();
        check_orthonormal(&truth);
        let l = truth.eigenvalues();
        // Unclamped values would be (0.2667, 0.15, 0.0333); clamping at the
        // extremes of the Jacobi bases pulls each down a little.
        assert!((l[0] - 0.2584).abs() < 1e-3, "{l:?}");
        assert!((l[1] - 0.1449).abs() < 1e-3, "{l:?}");
        assert!((l[2] - 0.0318).abs() < 5e-4, "{l:?}");
    }

    #[test]
    fn unclamped_block_covariance_is_closed_form() {
        // With tiny amplitudes no clamping occurs and the covariance is
        // a²/12 fa fa' + b²/12 fb fb' up to midpoint-rule error.
        let fa = [0.3, -0.5, 1.0];
        let fb = [1.0, 0.2, -0.7];
        let c = block_covariance(0.2, &fa, 0.1, &fb, 200);
        for r in 0..3 {
            for s in 0..3 {
                let want = 0.04 / 12.0 * fa[r] * fa[s] + 0.01 / 12.0 * fb[r] * fb[s];
                assert!((c[(r, s)] - want).abs() < 1e-7);
            }
        }
    }
}
