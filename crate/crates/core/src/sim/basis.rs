//! Orthonormal bases on [0, 1] used by the simulation designs.

use std::sync::OnceLock;

/// Polynomial basis of the distribution design:
/// `φ1 = (t² - 0.5)/0.3416`, `φ2 = √3 t`,
/// `φ3 = (t³ - 0.3571t² - 0.6t + 0.1786)/0.0895`.
/// The coefficients are rounded, so orthonormality holds to about 1e-4.
pub fn dist_basis(t: f64) -> [f64; 3] {
    [
        (t * t - 0.5) / 0.3416,
        3f64.sqrt() * t,
        (t * t * t - 0.3571 * t * t - 0.6 * t + 0.1786) / 0.0895,
    ]
}

/// Jacobi polynomial `P_n^{(α,β)}(x)` by the three-term recurrence.
pub fn jacobi_poly(n: usize, alpha: f64, beta: f64, x: f64) -> f64 {
    let p0 = 1.0;
    if n == 0 {
        return p0;
    }
    let p1 = (alpha + 1.0) + 0.5 * (alpha + beta + 2.0) * (x - 1.0);
    let (mut prev, mut cur) = (p0, p1);
    for k in 2..=n {
        let k = k as f64;
        let s = 2.0 * k + alpha + beta;
        let a1 = 2.0 * k * (k + alpha + beta) * (s - 2.0);
        let a2 = (s - 1.0) * (alpha * alpha - beta * beta);
        let a3 = (s - 2.0) * (s - 1.0) * s;
        let a4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * s;
        let next = ((a2 + a3 * x) * cur - a4 * prev) / a1;
        prev = cur;
        cur = next;
    }
    cur
}

const JACOBI_ALPHA: f64 = 4.0;
const JACOBI_BETA: f64 = 3.0;

fn jacobi_unnormalized(j: usize, t: f64) -> f64 {
    jacobi_poly(2 * j, JACOBI_ALPHA, JACOBI_BETA, 2.0 * t - 1.0) * t.powf(1.5) * (1.0 - t).powi(2)
}

/// Composite Simpson rule on [0, 1].
fn simpson(f: impl Fn(f64) -> f64, intervals: usize) -> f64 {
    let n = intervals + intervals % 2;
    let h = 1.0 / n as f64;
    let mut acc = f(0.0) + f(1.0);
    for k in 1..n {
        let c = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += c * f(k as f64 * h);
    }
    acc * h / 3.0
}

/// L² norms of the unnormalized Jacobi-derived functions, j = 1, 2, 3.
pub fn jacobi_norms() -> &'static [f64; 3] {
    static NORMS: OnceLock<[f64; 3]> = OnceLock::new();
    NORMS.get_or_init(|| {
        let mut out = [0.0; 3];
        for (j, slot) in out.iter_mut().enumerate() {
            *slot = simpson(|t| jacobi_unnormalized(j + 1, t).powi(2), 20_000).sqrt();
        }
        out
    })
}

/// Network-design basis:
/// `φ_j(t) ∝ P_{2j}^{(4,3)}(2t - 1) t^{1.5} (1 - t)²`, scaled to unit
/// L²[0, 1] norm. `j` is 1-based, `j ∈ {1, 2, 3}`.
pub fn jacobi_basis(j: usize, t: f64) -> f64 {
    assert!((1..=3).contains(&j), "jacobi basis index must be 1, 2 or 3");
    jacobi_unnormalized(j, t) / jacobi_norms()[j - 1]
}
