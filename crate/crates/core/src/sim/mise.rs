use rayon::prelude::*;

use super::{simulate_distributions, simulate_networks, Design, DistSimConfig, NetSimConfig, TruthSpec};
use crate::eigen::eigendecompose;
use crate::error::{Error, Result};
use crate::kernel::{estimate_cov_surface, ObjectSample};
use crate::quadrature::{inner, weighted_frobenius};
use crate::text::format_float;

/// Number of eigenpairs tracked by the MISE tables.
pub const MISE_COMPONENTS: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct MiseConfig {
    pub design: Design,
    pub n_values: Vec<usize>,
    pub grid_size: usize,
    /// Quantile levels per distribution (ignored for networks).
    pub quantile_size: usize,
    pub runs: usize,
    pub seed: u64,
    /// Feed the true surface to the eigensolver instead of an estimate.
    /// Every error should then vanish up to rounding.
    pub truth_fed: bool,
}

impl MiseConfig {
    pub fn new(design: Design, n_values: Vec<usize>) -> Self {
        MiseConfig {
            design,
            n_values,
            grid_size: 51,
            quantile_size: 100,
            runs: 100,
            seed: 0,
            truth_fed: false,
        }
    }
}

/// Errors averaged over runs for one sample size.
#[derive(Debug, Clone, PartialEq)]
pub struct MiseRow {
    pub n: usize,
    pub surface: f64,
    pub eigenfunctions: [f64; MISE_COMPONENTS],
    pub eigenvalues: [f64; MISE_COMPONENTS],
    /// Average estimated eigenvalues (a diagnostic, not an error).
    pub mean_eigenvalues: [f64; MISE_COMPONENTS],
}

#[derive(Debug, Clone, PartialEq)]
pub struct MiseTable {
    pub design: Design,
    pub runs: usize,
    pub rows: Vec<MiseRow>,
}

impl MiseTable {
    /// Columns `n,C,phi1,phi2,phi3,lambda1,lambda2,lambda3`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,C,phi1,phi2,phi3,lambda1,lambda2,lambda3\n");
        for row in &self.rows {
            out.push_str(&row.n.to_string());
            let cells = std::iter::once(row.surface)
                .chain(row.eigenfunctions)
                .chain(row.eigenvalues);
            for v in cells {
                out.push(',');
                out.push_str(&format_float(v));
            }
            out.push('\n');
        }
        out
    }

    pub fn row(&self, n: usize) -> Option<&MiseRow> {
        self.rows.iter().find(|r| r.n == n)
    }
}

/// Simulated sample of size `n` for run `replicate`. Runs use disjoint RNG
/// substreams; within a run, smaller `n` gives a prefix of larger samples.
pub fn replicate_sample(cfg: &MiseConfig, n: usize, replicate: u32) -> Result<ObjectSample> {
    match cfg.design {
        Design::Distributions => simulate_distributions(&DistSimConfig {
            n,
            grid_size: cfg.grid_size,
            quantile_size: cfg.quantile_size,
            seed: cfg.seed,
            replicate,
        }),
        Design::Networks => simulate_networks(&NetSimConfig {
            n,
            grid_size: cfg.grid_size,
            seed: cfg.seed,
            replicate,
        }),
    }
}

struct RunErrors {
    surface: f64,
    eigenfunctions: [f64; MISE_COMPONENTS],
    eigenvalues: [f64; MISE_COMPONENTS],
    estimates: [f64; MISE_COMPONENTS],
}

pub fn mise_report(cfg: &MiseConfig, truth: &TruthSpec) -> Result<MiseTable> {
    if cfg.runs == 0 {
        return Err(Error::InvalidConfig("runs must be at least 1".into()));
    }
    if cfg.n_values.is_empty() {
        return Err(Error::InvalidConfig("no sample sizes given".into()));
    }
    if truth.time_grid().len() != cfg.grid_size {
        return Err(Error::InvalidConfig(format!(
            "truth grid has {} points, config asks for {}",
            truth.time_grid().len(),
            cfg.grid_size
        )));
    }
    let true_surface = truth.surface()?;
    let mut rows = Vec::with_capacity(cfg.n_values.len());
    for &n in &cfg.n_values {
        let per_run = (0..cfg.runs)
            .into_par_iter()
            .map(|k| {
                let estimate = if cfg.truth_fed {
                    true_surface.clone()
                } else {
                    estimate_cov_surface(&replicate_sample(cfg, n, k as u32)?)?
                };
                run_errors(&estimate, &true_surface, truth)
            })
            .collect::<Result<Vec<_>>>()?;

        // In-order reduction keeps the table independent of thread count.
        let scale = 1.0 / cfg.runs as f64;
        let mut row = MiseRow {
            n,
            surface: 0.0,
            eigenfunctions: [0.0; MISE_COMPONENTS],
            eigenvalues: [0.0; MISE_COMPONENTS],
            mean_eigenvalues: [0.0; MISE_COMPONENTS],
        };
        for e in &per_run {
            row.surface += e.surface * scale;
            for j in 0..MISE_COMPONENTS {
                row.eigenfunctions[j] += e.eigenfunctions[j] * scale;
                row.eigenvalues[j] += e.eigenvalues[j] * scale;
                row.mean_eigenvalues[j] += e.estimates[j] * scale;
            }
        }
        rows.push(row);
    }
    Ok(MiseTable { design: cfg.design, runs: cfg.runs, rows })
}

fn run_errors(
    estimate: &crate::kernel::KernelSurface,
    true_surface: &crate::kernel::KernelSurface,
    truth: &TruthSpec,
) -> Result<RunErrors> {
    let w = truth.quad_weights();
    let diff = estimate.values() - true_surface.values();
    let surface = weighted_frobenius(&diff, w).powi(2);
    let es = eigendecompose(estimate, MISE_COMPONENTS)?;
    let mut out = RunErrors {
        surface,
        eigenfunctions: [0.0; MISE_COMPONENTS],
        eigenvalues: [0.0; MISE_COMPONENTS],
        estimates: [0.0; MISE_COMPONENTS],
    };
    for j in 0..MISE_COMPONENTS {
        let phi = truth.eigenfunctions()[j].as_slice();
        let hat = es.eigenfunction(j);
        let sign = if inner(hat, phi, w) < 0.0 { -1.0 } else { 1.0 };
        let d: Vec<f64> = hat.iter().zip(phi).map(|(h, p)| sign * h - p).collect();
        out.eigenfunctions[j] = inner(&d, &d, w);
        let lam = es.eigenvalues()[j];
        out.eigenvalues[j] = (lam - truth.eigenvalues()[j]).powi(2);
        out.estimates[j] = lam;
    }
    Ok(out)
}
