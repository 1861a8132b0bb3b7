//! Simulation designs for distribution-valued and network-valued curves,
//! plus the Monte-Carlo error harness.
//!
//! Every trajectory draws from its own ChaCha8 substream keyed by
//! `(seed, replicate, index)`, so growing `n` never changes the first
//! trajectories and replicates never share draws.

mod basis;
mod mise;
mod normal;
mod truth;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{ObjectSample, ObjectTrajectory};
use crate::quadrature::uniform_grid;
use crate::spaces::{ObjectPoint, SpaceKind};

pub use basis::{dist_basis, jacobi_basis, jacobi_norms, jacobi_poly};
pub use mise::{mise_report, replicate_sample, MiseConfig, MiseRow, MiseTable, MISE_COMPONENTS};
pub use normal::inverse_normal_cdf;
pub use truth::{network_population_surface, TruthSpec, NETWORK_ORACLE_RESOLUTION};

/// Lower bound applied to simulated standard deviations.
pub const SIGMA_FLOOR: f64 = 1e-6;

/// Nodes per network and per community.
pub const NETWORK_NODES: usize = 10;
pub const COMMUNITY_SIZE: usize = 5;
/// Edge weight between the two communities.
pub const CROSS_WEIGHT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Design {
    /// Gaussian distributions with random mean and scale curves.
    #[serde(rename = "dist")]
    Distributions,
    /// Two-community weighted networks.
    #[serde(rename = "net")]
    Networks,
}

impl std::str::FromStr for Design {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dist" => Ok(Design::Distributions),
            "net" => Ok(Design::Networks),
            other => Err(Error::InvalidConfig(format!("unknown design '{other}' (expected dist or net)"))),
        }
    }
}

impl std::fmt::Display for Design {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Design::Distributions => "dist",
            Design::Networks => "net",
        })
    }
}

/// RNG for trajectory `index` of replicate `replicate`.
pub fn trajectory_rng(seed: u64, replicate: u32, index: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((u64::from(replicate) << 32) | u64::from(index));
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DistSimConfig {
    pub n: usize,
    /// Number of points on the uniform time grid.
    pub grid_size: usize,
    /// Quantile levels per distribution.
    pub quantile_size: usize,
    pub seed: u64,
    pub replicate: u32,
}

impl DistSimConfig {
    pub fn new(n: usize, grid_size: usize, quantile_size: usize, seed: u64) -> Self {
        DistSimConfig { n, grid_size, quantile_size, seed, replicate: 0 }
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 || self.grid_size < 3 || self.quantile_size < 2 {
            return Err(Error::InvalidConfig(format!(
                "distribution design needs n >= 2, T >= 3, m >= 2 (got n={}, T={}, m={})",
                self.n, self.grid_size, self.quantile_size
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NetSimConfig {
    pub n: usize,
    pub grid_size: usize,
    pub seed: u64,
    pub replicate: u32,
}

impl NetSimConfig {
    pub fn new(n: usize, grid_size: usize, seed: u64) -> Self {
        NetSimConfig { n, grid_size, seed, replicate: 0 }
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 || self.grid_size < 2 {
            return Err(Error::InvalidConfig(format!(
                "network design needs n >= 2, T >= 2 (got n={}, T={})",
                self.n, self.grid_size
            )));
        }
        Ok(())
    }
}

/// Random coefficients of one distribution-valued curve:
/// `μ(t) = 1 + U φ1 + V φ3`, `σ(t) = 3 + W φ2 + Z φ3`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DistDraw {
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub z: f64,
}

impl DistDraw {
    /// `U ~ N(0, 12)`, `V ~ N(0, 1)`, `W ~ √72·Unif(0,1)`, `Z ~ 3·Unif(0,1)`.
    pub fn sample<R: Rng>(rng: &mut R) -> Self {
        let u: f64 = rng.sample::<f64, _>(StandardNormal) * 12f64.sqrt();
        let v: f64 = rng.sample(StandardNormal);
        let w = 72f64.sqrt() * rng.gen::<f64>();
        let z = 3.0 * rng.gen::<f64>();
        DistDraw { u, v, w, z }
    }

    pub fn mean_at(&self, t: f64) -> f64 {
        let phi = dist_basis(t);
        1.0 + self.u * phi[0] + self.v * phi[2]
    }

    pub fn sd_at(&self, t: f64) -> f64 {
        let phi = dist_basis(t);
        (3.0 + self.w * phi[1] + self.z * phi[2]).max(SIGMA_FLOOR)
    }

    /// Quantile-vector trajectory `Q(t)(u_k) = μ(t) + σ(t) Φ⁻¹(u_k)`.
    pub fn trajectory(&self, grid: &[f64], quantile_size: usize) -> Result<ObjectTrajectory> {
        let space = SpaceKind::quantile(quantile_size);
        let z: Vec<f64> = SpaceKind::quantile_levels(quantile_size)
            .iter()
            .map(|&u| inverse_normal_cdf(u))
            .collect();
        let points = grid
            .iter()
            .map(|&t| {
                let (mu, sd) = (self.mean_at(t), self.sd_at(t));
                ObjectPoint::new(space, z.iter().map(|x| mu + sd * x).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        ObjectTrajectory::new(space, grid.to_vec(), points)
    }
}

/// Random coefficients of one network-valued curve:
/// `p1 = 0.5 + U φ1 + V φ3`, `p2 = 0.5 + W φ2 + Z φ3`, `p12 = 0.1`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NetDraw {
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub z: f64,
}

impl NetDraw {
    /// `U ~ Unif(0, 0.4)`, `V ~ Unif(0, 0.1)`, `W ~ Unif(0, 0.3)`,
    /// `Z ~ Unif(0, 0.1)`.
    pub fn sample<R: Rng>(rng: &mut R) -> Self {
        NetDraw {
            u: 0.4 * rng.gen::<f64>(),
            v: 0.1 * rng.gen::<f64>(),
            w: 0.3 * rng.gen::<f64>(),
            z: 0.1 * rng.gen::<f64>(),
        }
    }

    /// Within-community edge weights `(p1, p2)` at time `t`, clamped to
    /// [0, 1].
    pub fn weights_at(&self, t: f64) -> (f64, f64) {
        let (f1, f2, f3) = (jacobi_basis(1, t), jacobi_basis(2, t), jacobi_basis(3, t));
        let p1 = 0.5 + self.u * f1 + self.v * f3;
        let p2 = 0.5 + self.w * f2 + self.z * f3;
        (p1.clamp(0.0, 1.0), p2.clamp(0.0, 1.0))
    }

    pub fn trajectory(&self, grid: &[f64]) -> Result<ObjectTrajectory> {
        let space = SpaceKind::adjacency(NETWORK_NODES);
        let points = grid
            .iter()
            .map(|&t| {
                let (p1, p2) = self.weights_at(t);
                ObjectPoint::new(space, community_adjacency(p1, p2))
            })
            .collect::<Result<Vec<_>>>()?;
        ObjectTrajectory::new(space, grid.to_vec(), points)
    }
}

/// Row-major adjacency of the two-community network: nodes `0..5` form the
/// first community, `5..10` the second.
pub fn community_adjacency(p1: f64, p2: f64) -> Vec<f64> {
    let r = NETWORK_NODES;
    let mut a = vec![0.0; r * r];
    for i in 0..r {
        for j in 0..r {
            if i == j {
                continue;
            }
            let ci = i / COMMUNITY_SIZE;
            let cj = j / COMMUNITY_SIZE;
            a[i * r + j] = match (ci, cj) {
                (0, 0) => p1,
                (1, 1) => p2,
                _ => CROSS_WEIGHT,
            };
        }
    }
    a
}

pub fn simulate_distributions(cfg: &DistSimConfig) -> Result<ObjectSample> {
    cfg.validate()?;
    let grid = uniform_grid(cfg.grid_size);
    let trajectories = (0..cfg.n)
        .map(|i| {
            let mut rng = trajectory_rng(cfg.seed, cfg.replicate, i as u32);
            DistDraw::sample(&mut rng).trajectory(&grid, cfg.quantile_size)
        })
        .collect::<Result<Vec<_>>>()?;
    ObjectSample::new(trajectories)
}

pub fn simulate_networks(cfg: &NetSimConfig) -> Result<ObjectSample> {
    cfg.validate()?;
    let grid = uniform_grid(cfg.grid_size);
    let trajectories = (0..cfg.n)
        .map(|i| {
            let mut rng = trajectory_rng(cfg.seed, cfg.replicate, i as u32);
            NetDraw::sample(&mut rng).trajectory(&grid)
        })
        .collect::<Result<Vec<_>>>()?;
    ObjectSample::new(trajectories)
}
