//! Eigendecomposition of a known kernel: the Brownian-motion covariance
//! min(s, t) has eigenvalues 1 / ((k - 1/2)² π²).

use std::f64::consts::PI;

use ofpca::eigen::{eigendecompose, explained_fraction};
use ofpca::kernel::KernelSurface;
use ofpca::quadrature::{uniform_grid, weighted_frobenius};

fn main() -> ofpca::Result<()> {
    let surface = KernelSurface::from_fn(uniform_grid(201), f64::min)?;
    let es = eigendecompose(&surface, 4)?;
    for (k, l) in es.eigenvalues().iter().enumerate() {
        let exact = 1.0 / ((k as f64 + 0.5).powi(2) * PI * PI);
        println!(
            "λ{} = {l:.6} (exact {exact:.6}), explained {:.4}",
            k + 1,
            explained_fraction(&es, k)?
        );
    }
    let err = weighted_frobenius(&(surface.values() - es.reconstruct()), surface.quad_weights());
    println!("rank-4 reconstruction error {err:.2e}");
    Ok(())
}
