//! Metric auto-covariance surface of simulated distribution trajectories,
//! next to the classical covariance it reduces to for scalar curves.

use ofpca::kernel::{estimate_cov_surface, total_variance};
use ofpca::quadrature::uniform_grid;
use ofpca::sim::{simulate_distributions, DistSimConfig};
use ofpca::{ObjectSample, ObjectTrajectory};

fn main() -> ofpca::Result<()> {
    let sample = simulate_distributions(&DistSimConfig::new(60, 11, 100, 1))?;
    let surface = estimate_cov_surface(&sample)?;
    println!("distribution trajectories, n = {}, T = {}", sample.len(), surface.grid_len());
    for s in (0..surface.grid_len()).step_by(5) {
        let row: Vec<String> = (0..surface.grid_len()).step_by(5).map(|t| format!("{:8.3}", surface.get(s, t))).collect();
        println!("  C(t{s}, ·) = {}", row.join(" "));
    }
    println!("total variance ∫C(t,t)dt = {:.4}", total_variance(&surface));

    let grid = uniform_grid(3);
    let curves = [[0.0, 1.0, 2.0], [1.0, 1.0, 1.0], [2.0, 0.5, 0.0]];
    let scalar = ObjectSample::new(
        curves.iter().map(|c| ObjectTrajectory::from_scalars(grid.clone(), c)).collect::<ofpca::Result<_>>()?,
    )?;
    println!("scalar surface (equals the sample covariance):\n{}", estimate_cov_surface(&scalar)?.values());
    Ok(())
}
