//! Time-varying two-community networks: the Fréchet mean network over
//! time and the leading modes of variation in edge weights.

use ofpca::fpca::frechet_mean_trajectory;
use ofpca::sim::{simulate_networks, NetSimConfig, NETWORK_NODES};
use ofpca::{fit, FitOptions};

fn main() -> ofpca::Result<()> {
    let sample = simulate_networks(&NetSimConfig::new(50, 21, 3))?;
    let mean = frechet_mean_trajectory(&sample)?;
    let r = NETWORK_NODES;
    for (t, g) in mean.time_grid().iter().zip(mean.points()).step_by(5) {
        let d = g.data();
        println!("t = {t:.2}: mean within-community weights {:.3} / {:.3}, across {:.3}", d[1], d[(r - 1) * r + r - 2], d[r - 1]);
    }
    let result = fit(&sample, &FitOptions { components: 3, ..FitOptions::default() })?;
    println!("eigenvalues: {:.4?}", result.eigen.eigenvalues());
    Ok(())
}
