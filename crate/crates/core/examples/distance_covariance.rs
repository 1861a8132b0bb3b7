//! Distance-covariance surface as a baseline next to the metric
//! auto-covariance. Only the latter is the kernel of an FPCA expansion.

use ofpca::eigen::eigendecompose;
use ofpca::kernel::{distance_cov_surface, estimate_cov_surface};
use ofpca::sim::{simulate_networks, NetSimConfig};

fn main() -> ofpca::Result<()> {
    let sample = simulate_networks(&NetSimConfig::new(80, 21, 11))?;
    let metric = estimate_cov_surface(&sample)?;
    let dcov = distance_cov_surface(&sample)?;
    for (s, t) in [(5, 5), (5, 15), (10, 20)] {
        println!(
            "({:.2}, {:.2}): metric covariance {:.4}, distance covariance {:.4}",
            metric.time_grid()[s],
            metric.time_grid()[t],
            metric.get(s, t),
            dcov.get(s, t)
        );
    }
    println!("metric surface eigenvalues:   {:.4?}", eigendecompose(&metric, 3)?.eigenvalues());
    println!("distance surface eigenvalues: {:.4?}", eigendecompose(&dcov, 3)?.eigenvalues());
    Ok(())
}
