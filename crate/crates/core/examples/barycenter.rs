//! Weighted barycenters in each object space, including signed weights
//! where the Euclidean average leaves the space and gets projected back.

use ofpca::spaces::{distance, project};
use ofpca::{barycenter, ObjectPoint, SpaceKind};

fn main() -> ofpca::Result<()> {
    let q = SpaceKind::quantile(4);
    let a = ObjectPoint::new(q, vec![-1.0, 0.0, 0.5, 2.0])?;
    let b = ObjectPoint::new(q, vec![0.0, 0.2, 2.0, 2.1])?;
    println!("W2 distance: {:.4}", distance(&a, &b)?);
    println!("midpoint:    {:?}", barycenter(&[a.clone(), b.clone()], &[0.5, 0.5])?.data());
    // 2a - b is not monotone; the barycenter is its isotonic projection.
    println!("2a - b:      {:?}", barycenter(&[a, b], &[2.0, -1.0])?.data());

    let adj = SpaceKind::adjacency(3);
    let g = project(adj, &[0.0, 0.9, 1.4, 0.9, 0.0, -0.2, 1.4, -0.2, 0.0])?;
    println!("projected adjacency: {:?}", g.data());

    let psd = SpaceKind::sym_psd(2);
    let m = project(psd, &[1.0, 0.0, 0.0, -0.5])?;
    println!("PSD projection of diag(1, -0.5): {:?}", m.data());
    Ok(())
}
