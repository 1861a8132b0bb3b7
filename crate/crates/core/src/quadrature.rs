//! Composite trapezoid quadrature on (possibly non-uniform) time grids.

use nalgebra::DMatrix;

/// Trapezoid weights for `grid`. They sum to `grid[last] - grid[0]`.
pub fn trapezoid_weights(grid: &[f64]) -> Vec<f64> {
    let n = grid.len();
    let mut w = vec![0.0; n];
    for k in 1..n {
        let h = 0.5 * (grid[k] - grid[k - 1]);
        w[k - 1] += h;
        w[k] += h;
    }
    w
}

/// Uniform grid of `len` points on [0, 1].
pub fn uniform_grid(len: usize) -> Vec<f64> {
    match len {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..len).map(|k| k as f64 / (len - 1) as f64).collect(),
    }
}

pub fn integrate(values: &[f64], weights: &[f64]) -> f64 {
    values.iter().zip(weights).map(|(v, w)| v * w).sum()
}

pub fn inner(a: &[f64], b: &[f64], weights: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .zip(weights)
        .map(|((x, y), w)| x * y * w)
        .sum()
}

/// Double integral of a surface sampled on the tensor grid.
pub fn integrate_surface(values: &DMatrix<f64>, weights: &[f64]) -> f64 {
    let mut total = 0.0;
    for (t, wt) in weights.iter().enumerate() {
        for (s, ws) in weights.iter().enumerate() {
            total += ws * wt * values[(s, t)];
        }
    }
    total
}

/// L² norm of a kernel surface: `sqrt(∫∫ K(s,t)² ds dt)` under the tensor
/// trapezoid rule. Equals the Frobenius norm of `W^½ K W^½`.
pub fn weighted_frobenius(values: &DMatrix<f64>, weights: &[f64]) -> f64 {
    integrate_surface(&values.map(|v| v * v), weights).sqrt()
}

/// Gram–Schmidt under the quadrature inner product, in input order.
pub fn orthonormalize(fs: Vec<Vec<f64>>, weights: &[f64]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(fs.len());
    for mut f in fs {
        for g in &out {
            let c = inner(&f, g, weights);
            f.iter_mut().zip(g).for_each(|(a, b)| *a -= c * b);
        }
        let n = inner(&f, &f, weights).sqrt();
        out.push(f.into_iter().map(|x| x / n).collect());
    }
    out
}
