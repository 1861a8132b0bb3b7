//! Brute-force Monte-Carlo oracles for the simulation designs, written
//! directly from the generating formulas.

#![allow(dead_code)]

use ofpca::quadrature::{orthonormalize, trapezoid_weights};
use ofpca::sim::jacobi_basis;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Mean and standard error of a Monte-Carlo estimate.
#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: f64,
    pub se: f64,
}

impl Estimate {
    pub fn within(&self, target: f64, ses: f64) -> bool {
        (self.value - target).abs() <= ses * self.se
    }
}

/// Sample variance of `x` with the standard error of that variance.
pub fn variance_with_se(x: &[f64]) -> Estimate {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let sq: Vec<f64> = x.iter().map(|v| (v - mean).powi(2)).collect();
    let var = sq.iter().sum::<f64>() / (n - 1.0);
    let sd = (sq.iter().map(|v| (v - var).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    Estimate { value: var, se: sd / n.sqrt() }
}

/// Clamped within-community edge weights `(p1, p2)` for one draw.
pub fn network_weights(u: f64, v: f64, w: f64, z: f64, t: f64) -> (f64, f64) {
    let p1 = 0.5 + u * jacobi_basis(1, t) + v * jacobi_basis(3, t);
    let p2 = 0.5 + w * jacobi_basis(2, t) + z * jacobi_basis(3, t);
    (p1.clamp(0.0, 1.0), p2.clamp(0.0, 1.0))
}

/// Draws of `(U, V, W, Z)` for the network design.
pub fn network_draws(count: usize, seed: u64) -> Vec<[f64; 4]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| [rng.gen_range(0.0..0.4), rng.gen_range(0.0..0.1), rng.gen_range(0.0..0.3), rng.gen_range(0.0..0.1)])
        .collect()
}

/// Jacobi bases on `grid`, orthonormalized under the trapezoid rule.
pub fn jacobi_grid_basis(grid: &[f64]) -> Vec<Vec<f64>> {
    let raw = (1..=3).map(|j| grid.iter().map(|&t| jacobi_basis(j, t)).collect()).collect();
    orthonormalize(raw, &trapezoid_weights(grid))
}

/// `⟨φ, C φ⟩` for the network design by brute force, one estimate per
/// entry of `phis`. With 20 ordered within-community pairs per block and
/// independent blocks, `⟨φ, C φ⟩ = 20 (Var⟨φ, p1⟩ + Var⟨φ, p2⟩)`.
pub fn network_rayleigh_mc(grid: &[f64], phis: &[Vec<f64>], draws: &[[f64; 4]]) -> Vec<Estimate> {
    let w = trapezoid_weights(grid);
    let k = phis.len();
    let mut a = vec![Vec::with_capacity(draws.len()); k];
    let mut b = vec![Vec::with_capacity(draws.len()); k];
    for d in draws {
        let (mut sa, mut sb) = (vec![0.0; k], vec![0.0; k]);
        for (idx, (&t, &wt)) in grid.iter().zip(&w).enumerate() {
            let (p1, p2) = network_weights(d[0], d[1], d[2], d[3], t);
            for j in 0..k {
                sa[j] += wt * phis[j][idx] * p1;
                sb[j] += wt * phis[j][idx] * p2;
            }
        }
        for j in 0..k {
            a[j].push(sa[j]);
            b[j].push(sb[j]);
        }
    }
    a.iter()
        .zip(&b)
        .map(|(a, b)| {
            let (va, vb) = (variance_with_se(a), variance_with_se(b));
            Estimate { value: 20.0 * (va.value + vb.value), se: 20.0 * (va.se.powi(2) + vb.se.powi(2)).sqrt() }
        })
        .collect()
}
