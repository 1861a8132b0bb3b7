//! Population checks for the simulation designs against Monte-Carlo
//! oracles built straight from the generating formulas.

mod common;

use common::{jacobi_grid_basis, network_draws, network_rayleigh_mc, network_weights, variance_with_se};
use ofpca::kernel::estimate_cov_surface;
use ofpca::quadrature::uniform_grid;
use ofpca::sim::{
    dist_basis, network_population_surface, simulate_distributions, simulate_networks, DistSimConfig, NetSimConfig,
    TruthSpec,
};
use ofpca::SpaceKind;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use statrs::distribution::{ContinuousCDF, Normal};

const M: usize = 100;

/// `(1/m) Σ Φ⁻¹(u_k)²`: the squared norm of the discretized standard normal
/// quantile function, which scales the σ-part of the covariance.
fn quantile_grid_factor(m: usize) -> f64 {
    let n = Normal::new(0.0, 1.0).unwrap();
    (1..=m).map(|k| n.inverse_cdf((k as f64 - 0.5) / m as f64).powi(2)).sum::<f64>() / m as f64
}

fn dist_target(s: f64, t: f64, c_m: f64) -> f64 {
    let (a, b) = (dist_basis(s), dist_basis(t));
    12.0 * a[0] * b[0] + a[2] * b[2] + c_m * (6.0 * a[1] * b[1] + 0.75 * a[2] * b[2])
}

#[test]
fn distribution_covariance_matches_closed_form() {
    let (s, t) = (0.3, 0.7);
    let normal = Normal::new(0.0, 1.0).unwrap();
    let z: Vec<f64> = (1..=M).map(|k| normal.inverse_cdf((k as f64 - 0.5) / M as f64)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let draws = 100_000;
    let mut qs = Vec::with_capacity(draws);
    let mut qt = Vec::with_capacity(draws);
    for _ in 0..draws {
        let u = 12f64.sqrt() * rng.sample::<f64, _>(StandardNormal);
        let v: f64 = rng.sample(StandardNormal);
        let w = 72f64.sqrt() * rng.gen::<f64>();
        let zz = 3.0 * rng.gen::<f64>();
        let at = |x: f64| {
            let f = dist_basis(x);
            (1.0 + u * f[0] + v * f[2], 3.0 + w * f[1] + zz * f[2])
        };
        qs.push(at(s));
        qt.push(at(t));
    }
    // Sample covariance of quantile vectors under the discrete W2 inner
    // product, which is what the U-statistic estimates for this space.
    let c_m = quantile_grid_factor(M);
    let mut per_draw: Vec<f64> = Vec::with_capacity(draws);
    let n = draws as f64;
    let (ms, mt) = (
        qs.iter().fold((0.0, 0.0), |acc, q| (acc.0 + q.0 / n, acc.1 + q.1 / n)),
        qt.iter().fold((0.0, 0.0), |acc, q| (acc.0 + q.0 / n, acc.1 + q.1 / n)),
    );
    for (a, b) in qs.iter().zip(&qt) {
        let inner: f64 = z
            .iter()
            .map(|zk| ((a.0 - ms.0) + (a.1 - ms.1) * zk) * ((b.0 - mt.0) + (b.1 - mt.1) * zk))
            .sum::<f64>()
            / M as f64;
        per_draw.push(inner);
    }
    let est = per_draw.iter().sum::<f64>() / (n - 1.0);
    let sd = (per_draw.iter().map(|v| (v - est).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let se = sd / n.sqrt();
    let target = dist_target(s, t, c_m);
    assert!((est - target).abs() <= 3.0 * se, "MC {est} ± {se} vs {target}");
    // The continuum value differs only through c_m.
    assert!((dist_target(s, t, 1.0) - target).abs() < 0.02 * target.abs());

    // The library's sampler and estimator land on the same population value.
    let sample = simulate_distributions(&DistSimConfig::new(1500, 11, M, 23)).unwrap();
    let surf = estimate_cov_surface(&sample).unwrap();
    let lib = surf.get(3, 7);
    let lib_se = sd / 1500f64.sqrt();
    assert!((lib - target).abs() <= 3.0 * lib_se, "library {lib} ± {lib_se} vs {target}");
}

#[test]
fn quantile_grid_factor_tends_to_one() {
    let levels = SpaceKind::quantile_levels(M);
    assert_eq!(levels.len(), M);
    let c = [quantile_grid_factor(100), quantile_grid_factor(1000), quantile_grid_factor(10000)];
    assert!((c[0] - 0.9873).abs() < 1e-3, "{c:?}");
    assert!(c[0] < c[1] && c[1] < c[2] && c[2] < 1.0);
}

#[test]
fn network_diagonal_matches_population_value() {
    let grid = uniform_grid(51);
    let pop = network_population_surface(&grid, 400).unwrap();
    let draws = network_draws(100_000, 29);
    let (p1, p2): (Vec<f64>, Vec<f64>) = draws.iter().map(|d| network_weights(d[0], d[1], d[2], d[3], 0.5)).unzip();
    let (v1, v2) = (variance_with_se(&p1), variance_with_se(&p2));
    let mc = 20.0 * (v1.value + v2.value);
    let se = 20.0 * (v1.se.powi(2) + v2.se.powi(2)).sqrt();
    let want = pop.get(25, 25);
    assert!((mc - want).abs() <= 3.0 * se, "MC {mc} ± {se} vs population {want}");

    // Grid {0, 0.5, 1} keeps the pairwise estimator cheap at this n.
    let sample = simulate_networks(&NetSimConfig::new(3000, 3, 31)).unwrap();
    let lib = estimate_cov_surface(&sample).unwrap().get(1, 1);
    let lib_se = se * (100_000f64 / 3000.0).sqrt();
    assert!((lib - want).abs() <= 3.0 * lib_se, "library {lib} ± {lib_se} vs {want}");
}

#[test]
fn network_eigenvalues_match_brute_force_oracle() {
    let grid = uniform_grid(51);
    let truth = TruthSpec::networks(&grid).unwrap();
    let phis = jacobi_grid_basis(&grid);
    let draws = network_draws(1_000_000, 37);
    let mc = network_rayleigh_mc(&grid, &phis, &draws);
    for (j, est) in mc.iter().enumerate() {
        let want = truth.eigenvalues()[j];
        assert!(est.within(want, 3.0), "λ{}: MC {} ± {} vs truth {want}", j + 1, est.value, est.se);
    }
    // The third eigenvalue sits near 0.032, far from 0.0417.
    let third = &mc[2];
    assert!((third.value - 0.0417).abs() > 50.0 * third.se, "{third:?}");
    assert!((third.value - 0.0318).abs() < 5e-4, "{third:?}");
}
