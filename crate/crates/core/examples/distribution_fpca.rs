//! Full pipeline on simulated distribution trajectories: eigenvalues,
//! scores, and object FPCs, each of which is itself a distribution.

use ofpca::sim::{simulate_distributions, DistSimConfig};
use ofpca::{fit, FitOptions};

fn main() -> ofpca::Result<()> {
    let sample = simulate_distributions(&DistSimConfig::new(100, 51, 100, 7))?;
    let opts = FitOptions { components: 3, object_fpcs: true, ..FitOptions::default() };
    let result = fit(&sample, &opts)?;

    println!("eigenvalues: {:.3?}", result.eigen.eigenvalues());
    for (i, row) in result.scores.iter().take(3).enumerate() {
        println!("scores of trajectory {i}: {row:.3?}");
    }
    let fpcs = result.object_fpcs.as_ref().expect("requested above");
    for (k, fpc) in fpcs[0].iter().enumerate() {
        match fpc {
            Some(q) => {
                let d = q.data();
                println!("object FPC {} of trajectory 0: quantiles {:.3} .. {:.3} (median {:.3})", k + 1, d[0], d[d.len() - 1], d[d.len() / 2]);
            }
            None => println!("object FPC {} skipped: eigenfunction integrates to ~0", k + 1),
        }
    }
    for w in &result.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
