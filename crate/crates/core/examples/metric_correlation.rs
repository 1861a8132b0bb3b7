//! Metric correlation between two time slices of distribution trajectories,
//! compared across near and far time gaps.

use ofpca::kernel::{metric_correlation, metric_variance};
use ofpca::sim::{simulate_distributions, DistSimConfig};

fn main() -> ofpca::Result<()> {
    let sample = simulate_distributions(&DistSimConfig::new(200, 21, 100, 5))?;
    let base = sample.slice(2);
    println!("metric variance at t = 0.1: {:.4}", metric_variance(&base)?);
    for k in [2, 4, 10, 18] {
        let rho = metric_correlation(&base, &sample.slice(k))?;
        println!("corr(X(0.1), X({:.1})) = {rho:.4}", sample.time_grid()[k]);
    }
    Ok(())
}
