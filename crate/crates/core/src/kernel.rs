//! Metric auto-covariance estimation.
//!
//! For a sample `X_1..X_n` of object-valued curves the surface is the
//! U-statistic
//!
//! ```text
//! Ĉ(s,t) = 1/(4n(n-1)) Σ_{i≠j} f_{s,t}(X_i, X_j)
//! f_{s,t}(x, y) = d²(x(s), y(t)) + d²(y(s), x(t)) - d²(x(s), x(t)) - d²(y(s), y(t))
//! ```
//!
//! Pairs are visited in `T × T` blocks, one per `(i, j)` with `i < j`, so the
//! `n²T²` distance tensor is never stored.

use nalgebra::{DMatrix, DMatrixView};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::trapezoid_weights;
use crate::spaces::{distance, distance_sq, ObjectPoint, SpaceKind};

/// One object-valued curve observed on a time grid in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectTrajectory {
    space: SpaceKind,
    time_grid: Vec<f64>,
    points: Vec<ObjectPoint>,
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 {
        return Err(Error::InvalidGrid(format!(
            "need at least 2 time points, got {}",
            grid.len()
        )));
    }
    if grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidGrid("non-finite time".into()));
    }
    if grid[0] < 0.0 || grid[grid.len() - 1] > 1.0 {
        return Err(Error::InvalidGrid("times must lie in [0, 1]".into()));
    }
    if let Some(k) = grid.windows(2).position(|w| w[0] >= w[1]) {
        return Err(Error::InvalidGrid(format!(
            "time grid not strictly increasing at index {}",
            k + 1
        )));
    }
    Ok(())
}

impl ObjectTrajectory {
    pub fn new(space: SpaceKind, time_grid: Vec<f64>, points: Vec<ObjectPoint>) -> Result<Self> {
        check_grid(&time_grid)?;
        if points.len() != time_grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} points on a grid of {} times",
                points.len(),
                time_grid.len()
            )));
        }
        if let Some(p) = points.iter().find(|p| p.space() != space) {
            return Err(Error::SpaceMismatch { left: space, right: p.space() });
        }
        Ok(ObjectTrajectory { space, time_grid, points })
    }

    /// Builds a scalar curve.
    pub fn from_scalars(time_grid: Vec<f64>, values: &[f64]) -> Result<Self> {
        let points = values
            .iter()
            .map(|&v| ObjectPoint::scalar(v))
            .collect::<Result<Vec<_>>>()?;
        Self::new(SpaceKind::scalar(), time_grid, points)
    }

    pub fn space(&self) -> SpaceKind {
        self.space
    }

    pub fn time_grid(&self) -> &[f64] {
        &self.time_grid
    }

    pub fn points(&self) -> &[ObjectPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Isometric Euclidean coordinates, one row per time point.
    fn coordinates(&self) -> DMatrix<f64> {
        let scale = self.space.coordinate_scale();
        let len = self.space.data_len();
        DMatrix::from_fn(self.points.len(), len, |t, l| scale * self.points[t].data()[l])
    }
}

/// `n ≥ 2` trajectories sharing a space and a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectSample {
    trajectories: Vec<ObjectTrajectory>,
}

impl ObjectSample {
    pub fn new(trajectories: Vec<ObjectTrajectory>) -> Result<Self> {
        if trajectories.len() < 2 {
            return Err(Error::TooFewTrajectories(trajectories.len()));
        }
        let first = &trajectories[0];
        for tr in &trajectories[1..] {
            if tr.space != first.space {
                return Err(Error::SpaceMismatch { left: first.space, right: tr.space });
            }
            if tr.time_grid != first.time_grid {
                return Err(Error::InvalidGrid("trajectories use different time grids".into()));
            }
        }
        Ok(ObjectSample { trajectories })
    }

    pub fn trajectories(&self) -> &[ObjectTrajectory] {
        &self.trajectories
    }

    pub fn len(&self) -> usize {
        self.trajectories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trajectories.is_empty()
    }

    pub fn space(&self) -> SpaceKind {
        self.trajectories[0].space
    }

    pub fn time_grid(&self) -> &[f64] {
        &self.trajectories[0].time_grid
    }

    /// All objects observed at grid index `t`.
    pub fn slice(&self, t: usize) -> Vec<ObjectPoint> {
        self.trajectories.iter().map(|tr| tr.points[t].clone()).collect()
    }
}

/// A symmetric `T × T` kernel sampled on a time grid, with trapezoid weights.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSurface {
    time_grid: Vec<f64>,
    values: DMatrix<f64>,
    quad_weights: Vec<f64>,
}

impl KernelSurface {
    /// Checks shape and symmetry (within 1e-12, relative to the largest
    /// entry), symmetrizes exactly and attaches trapezoid weights.
    pub fn new(time_grid: Vec<f64>, mut values: DMatrix<f64>) -> Result<Self> {
        check_grid(&time_grid)?;
        let t = time_grid.len();
        if values.shape() != (t, t) {
            return Err(Error::InvalidSurface(format!(
                "surface is {:?}, grid has {t} points",
                values.shape()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSurface("non-finite entry".into()));
        }
        let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for s in 0..t {
            for u in (s + 1)..t {
                if (values[(s, u)] - values[(u, s)]).abs() > 1e-12 * scale {
                    return Err(Error::InvalidSurface(format!("asymmetric at ({s}, {u})")));
                }
            }
        }
        symmetrize(&mut values);
        let quad_weights = trapezoid_weights(&time_grid);
        Ok(KernelSurface { time_grid, values, quad_weights })
    }

    /// Samples `kernel(s, t)` on `time_grid`, symmetrizing the result.
    pub fn from_fn(time_grid: Vec<f64>, kernel: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let t = time_grid.len();
        let mut values = DMatrix::from_fn(t, t, |a, b| kernel(time_grid[a], time_grid[b]));
        symmetrize(&mut values);
        Self::new(time_grid, values)
    }

    pub fn time_grid(&self) -> &[f64] {
        &self.time_grid
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn quad_weights(&self) -> &[f64] {
        &self.quad_weights
    }

    pub fn get(&self, s: usize, t: usize) -> f64 {
        self.values[(s, t)]
    }

    pub fn grid_len(&self) -> usize {
        self.time_grid.len()
    }
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let t = m.nrows();
    for s in 0..t {
        for u in (s + 1)..t {
            let avg = 0.5 * (m[(s, u)] + m[(u, s)]);
            m[(s, u)] = avg;
            m[(u, s)] = avg;
        }
    }
}

/// `f_{s,t}(x, y)` evaluated at grid indices `s_idx`, `t_idx`.
pub fn pair_kernel_f(
    x: &ObjectTrajectory,
    y: &ObjectTrajectory,
    s_idx: usize,
    t_idx: usize,
) -> Result<f64> {
    let len = x.len().min(y.len());
    if s_idx >= len || t_idx >= len {
        return Err(Error::IndexError { s: s_idx, t: t_idx, len });
    }
    let (xs, xt) = (&x.points[s_idx], &x.points[t_idx]);
    let (ys, yt) = (&y.points[s_idx], &y.points[t_idx]);
    Ok(distance_sq(xs, yt)? + distance_sq(ys, xt)? - distance_sq(xs, xt)? - distance_sq(ys, yt)?)
}

/// How each `(i, j)` block of `f` values is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairEvaluation {
    /// Use the space's Euclidean coordinates: for an L²-type metric
    /// `f_{s,t}(x, y) = 2⟨x(s) - y(s), x(t) - y(t)⟩`, so a block is
    /// `2 Δ Δᵀ` with `Δ = X_i - X_j`, a single matrix product.
    #[default]
    Coordinates,
    /// Evaluate the four squared distances of `f` directly through the
    /// space metric.
    Distances,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CovOptions {
    pub evaluation: PairEvaluation,
}

/// U-statistic estimate of the metric auto-covariance surface.
pub fn estimate_cov_surface(sample: &ObjectSample) -> Result<KernelSurface> {
    estimate_cov_surface_with(sample, &CovOptions::default())
}

pub fn estimate_cov_surface_with(sample: &ObjectSample, opts: &CovOptions) -> Result<KernelSurface> {
    let n = sample.len();
    if n < 2 {
        return Err(Error::TooFewTrajectories(n));
    }
    let t = sample.time_grid().len();

    // Per-i partial sums over j > i, reduced afterwards in index order so the
    // result does not depend on the thread count.
    let partials: Vec<DMatrix<f64>> = match opts.evaluation {
        PairEvaluation::Coordinates => {
            let coords: Vec<DMatrix<f64>> =
                sample.trajectories().iter().map(ObjectTrajectory::coordinates).collect();
            (0..n - 1)
                .into_par_iter()
                .map(|i| coordinate_block_row(&coords, i))
                .collect()
        }
        PairEvaluation::Distances => {
            let self_dist: Vec<DMatrix<f64>> = sample
                .trajectories()
                .iter()
                .map(|tr| cross_distances(tr, tr))
                .collect();
            (0..n - 1)
                .into_par_iter()
                .map(|i| distance_block_row(sample, &self_dist, i))
                .collect()
        }
    };

    let mut sum = DMatrix::<f64>::zeros(t, t);
    for p in &partials {
        sum += p;
    }
    // Σ_{i≠j} f = 2 Σ_{i<j} f
    let scale = 2.0 / (4.0 * n as f64 * (n - 1) as f64);
    sum *= scale;
    // upper triangle is authoritative
    for s in 0..t {
        for u in (s + 1)..t {
            sum[(u, s)] = sum[(s, u)];
        }
    }
    KernelSurface::new(sample.time_grid().to_vec(), sum)
}

/// `Σ_{j>i} 2 Δ_ij Δ_ijᵀ`, computed as one product of the horizontally
/// stacked differences.
fn coordinate_block_row(coords: &[DMatrix<f64>], i: usize) -> DMatrix<f64> {
    let n = coords.len();
    let (t, l) = coords[i].shape();
    let others = n - i - 1;
    // column-major T × (others·L): block k holds X_i - X_{i+1+k}
    let mut stacked = vec![0.0; t * l * others];
    for (k, xj) in coords[i + 1..].iter().enumerate() {
        let block = &mut stacked[k * t * l..(k + 1) * t * l];
        for ((dst, a), b) in block.iter_mut().zip(coords[i].as_slice()).zip(xj.as_slice()) {
            *dst = a - b;
        }
    }
    let width = others * l;
    let delta = DMatrixView::from_slice(&stacked, t, width);
    // transpose view over the same storage
    let delta_t = DMatrixView::from_slice_with_strides_generic(
        &stacked,
        nalgebra::Dyn(width),
        nalgebra::Dyn(t),
        nalgebra::Dyn(t),
        nalgebra::Dyn(1),
    );
    let mut out = DMatrix::<f64>::zeros(t, t);
    out.gemm(2.0, &delta, &delta_t, 0.0);
    out
}

/// `D(s, t) = d²(a(s), b(t))`.
fn cross_distances(a: &ObjectTrajectory, b: &ObjectTrajectory) -> DMatrix<f64> {
    let space = a.space;
    let t = a.len();
    DMatrix::from_fn(t, t, |s, u| space.distance_sq_raw(a.points[s].data(), b.points[u].data()))
}

fn distance_block_row(sample: &ObjectSample, self_dist: &[DMatrix<f64>], i: usize) -> DMatrix<f64> {
    let trs = sample.trajectories();
    let t = trs[i].len();
    let mut out = DMatrix::<f64>::zeros(t, t);
    for j in (i + 1)..trs.len() {
        let d_ij = cross_distances(&trs[i], &trs[j]);
        for u in 0..t {
            for s in 0..=u {
                out[(s, u)] +=
                    d_ij[(s, u)] + d_ij[(u, s)] - self_dist[i][(s, u)] - self_dist[j][(s, u)];
            }
        }
    }
    out
}

/// U-statistic estimate of the metric variance `½ E d²(U, U')`.
pub fn metric_variance(objs: &[ObjectPoint]) -> Result<f64> {
    let n = objs.len();
    if n < 2 {
        return Err(Error::TooFewTrajectories(n));
    }
    let mut sum = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            sum += distance_sq(&objs[i], &objs[j])?;
        }
    }
    // Σ_{i≠j} = 2 Σ_{i<j}
    Ok(2.0 * sum / (2.0 * n as f64 * (n - 1) as f64))
}

/// U-statistic estimate of the metric covariance of paired objects.
pub fn metric_covariance(u: &[ObjectPoint], v: &[ObjectPoint]) -> Result<f64> {
    let n = u.len();
    if v.len() != n {
        return Err(Error::InvalidObject(format!(
            "paired lists differ in length: {} vs {}",
            n,
            v.len()
        )));
    }
    if n < 2 {
        return Err(Error::TooFewTrajectories(n));
    }
    let mut sum = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            sum += distance_sq(&u[i], &v[j])? + distance_sq(&u[j], &v[i])?
                - distance_sq(&u[i], &v[i])?
                - distance_sq(&u[j], &v[j])?;
        }
    }
    Ok(2.0 * sum / (4.0 * n as f64 * (n - 1) as f64))
}

/// Metric correlation; values overshooting ±1 by at most 1e-9 are clamped.
pub fn metric_correlation(u: &[ObjectPoint], v: &[ObjectPoint]) -> Result<f64> {
    let cov = metric_covariance(u, v)?;
    let var_u = metric_variance(u)?;
    let var_v = metric_variance(v)?;
    if var_u <= 0.0 || var_v <= 0.0 {
        return Err(Error::DegenerateVariance);
    }
    let rho = cov / (var_u * var_v).sqrt();
    if rho.abs() > 1.0 && rho.abs() <= 1.0 + 1e-9 {
        Ok(rho.signum())
    } else {
        Ok(rho)
    }
}

/// `∫ C(t, t) dt` under the surface's quadrature weights.
pub fn total_variance(surface: &KernelSurface) -> f64 {
    surface
        .quad_weights
        .iter()
        .enumerate()
        .map(|(k, w)| w * surface.values[(k, k)])
        .sum()
}

/// Sample distance covariance (squared, V-statistic form) between the
/// time slices `{X_i(s)}` and `{X_i(t)}` for every grid pair.
pub fn distance_cov_surface(sample: &ObjectSample) -> Result<KernelSurface> {
    let n = sample.len();
    let t = sample.time_grid().len();
    let centered: Vec<DMatrix<f64>> = (0..t)
        .into_par_iter()
        .map(|k| double_centered_distances(&sample.slice(k)))
        .collect::<Result<_>>()?;
    let nn = (n * n) as f64;
    let mut values = DMatrix::<f64>::zeros(t, t);
    for s in 0..t {
        for u in s..t {
            let v = centered[s].component_mul(&centered[u]).sum() / nn;
            values[(s, u)] = v;
            values[(u, s)] = v;
        }
    }
    KernelSurface::new(sample.time_grid().to_vec(), values)
}

fn double_centered_distances(objs: &[ObjectPoint]) -> Result<DMatrix<f64>> {
    let n = objs.len();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let d = distance(&objs[i], &objs[j])?;
            a[(i, j)] = d;
            a[(j, i)] = d;
        }
    }
    let row_means: Vec<f64> = (0..n).map(|i| a.row(i).sum() / n as f64).collect();
    let grand = row_means.iter().sum::<f64>() / n as f64;
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] += grand - row_means[i] - row_means[j];
        }
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::uniform_grid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn scalar_sample(rows: &[Vec<f64>]) -> ObjectSample {
        let grid = uniform_grid(rows[0].len());
        ObjectSample::new(
            rows.iter()
                .map(|r| ObjectTrajectory::from_scalars(grid.clone(), r).unwrap())
                .collect(),
        )
        .unwrap()
    }

    /// Classical unbiased cross-covariance, written independently of the
    /// U-statistic.
    fn classical_cov(rows: &[Vec<f64>]) -> DMatrix<f64> {
        let n = rows.len();
        let t = rows[0].len();
        let mean: Vec<f64> = (0..t).map(|k| rows.iter().map(|r| r[k]).sum::<f64>() / n as f64).collect();
        DMatrix::from_fn(t, t, |s, u| {
            rows.iter().map(|r| (r[s] - mean[s]) * (r[u] - mean[u])).sum::<f64>() / (n - 1) as f64
        })
    }

    fn random_rows(rng: &mut ChaCha8Rng, n: usize, t: usize) -> Vec<Vec<f64>> {
        (0..n).map(|_| (0..t).map(|_| rng.gen_range(-3.0..3.0)).collect()).collect()
    }

    #[test]
    fn f_for_identical_and_constant_curves() {
        let grid = uniform_grid(4);
        let x = ObjectTrajectory::from_scalars(grid.clone(), &[0.3, -1.0, 2.0, 0.5]).unwrap();
        let a = ObjectTrajectory::from_scalars(grid.clone(), &[1.0; 4]).unwrap();
        let b = ObjectTrajectory::from_scalars(grid, &[-2.5; 4]).unwrap();
        for s in 0..4 {
            for t in 0..4 {
                assert_eq!(pair_kernel_f(&x, &x, s, t).unwrap(), 0.0);
                // Only the two cross terms survive: 2 d²(a, b).
                assert_eq!(pair_kernel_f(&a, &b, s, t).unwrap(), 2.0 * 3.5 * 3.5);
            }
        }
    }

    #[test]
    fn f_on_diagonal_is_twice_squared_distance() {
        let grid = uniform_grid(2);
        let x = ObjectTrajectory::from_scalars(grid.clone(), &[0.0, 1.0]).unwrap();
        let y = ObjectTrajectory::from_scalars(grid, &[2.0, 1.0]).unwrap();
        assert_eq!(pair_kernel_f(&x, &y, 0, 0).unwrap(), 8.0);
        assert!(matches!(pair_kernel_f(&x, &y, 0, 2), Err(Error::IndexError { .. })));
    }

    #[test]
    fn f_symmetries() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rows = random_rows(&mut rng, 2, 5);
        let s = scalar_sample(&rows);
        let (x, y) = (&s.trajectories()[0], &s.trajectories()[1]);
        for a in 0..5 {
            for b in 0..5 {
                let f = pair_kernel_f(x, y, a, b).unwrap();
                assert!((f - pair_kernel_f(y, x, a, b).unwrap()).abs() < 1e-12);
                assert!((f - pair_kernel_f(x, y, b, a).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn two_point_variance_surface() {
        let s = scalar_sample(&[vec![0.0, 1.0], vec![2.0, 1.0]]);
        let c = estimate_cov_surface(&s).unwrap();
        assert!((c.get(0, 0) - 2.0).abs() < 1e-14);
        assert_eq!(c.get(1, 1), 0.0);
    }

    #[test]
    fn identical_trajectories_give_zero_surface() {
        let row = vec![0.2, -0.7, 1.3, 0.0];
        let s = scalar_sample(&[row.clone(), row.clone(), row]);
        let c = estimate_cov_surface(&s).unwrap();
        assert!(c.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn matches_classical_covariance_for_scalars() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let n = rng.gen_range(2..30);
            let t = rng.gen_range(2..15);
            let rows = random_rows(&mut rng, n, t);
            let oracle = classical_cov(&rows);
            for evaluation in [PairEvaluation::Coordinates, PairEvaluation::Distances] {
                let c = estimate_cov_surface_with(&scalar_sample(&rows), &CovOptions { evaluation }).unwrap();
                let err = (c.values() - &oracle).abs().max();
                assert!(err < 1e-10, "{evaluation:?}: {err}");
            }
        }
    }

    #[test]
    fn evaluation_routes_agree_on_quantiles() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let grid = uniform_grid(6);
        let space = SpaceKind::quantile(5);
        let trs: Vec<_> = (0..7)
            .map(|_| {
                let pts = (0..6)
                    .map(|_| {
                        let mut v: Vec<f64> = (0..5).map(|_| rng.gen_range(-2.0..2.0)).collect();
                        v.sort_by(f64::total_cmp);
                        ObjectPoint::new(space, v).unwrap()
                    })
                    .collect();
                ObjectTrajectory::new(space, grid.clone(), pts).unwrap()
            })
            .collect();
        let sample = ObjectSample::new(trs).unwrap();
        let a = estimate_cov_surface_with(&sample, &CovOptions { evaluation: PairEvaluation::Coordinates }).unwrap();
        let b = estimate_cov_surface_with(&sample, &CovOptions { evaluation: PairEvaluation::Distances }).unwrap();
        assert!((a.values() - b.values()).abs().max() < 1e-12);
    }

    #[test]
    fn one_trajectory_is_rejected() {
        let tr = ObjectTrajectory::from_scalars(uniform_grid(3), &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(ObjectSample::new(vec![tr]).unwrap_err(), Error::TooFewTrajectories(1));
    }

    #[test]
    fn metric_variance_examples() {
        let pts = |v: &[f64]| v.iter().map(|&x| ObjectPoint::scalar(x).unwrap()).collect::<Vec<_>>();
        assert_eq!(metric_variance(&pts(&[1.5, 1.5, 1.5])).unwrap(), 0.0);
        assert!((metric_variance(&pts(&[0.0, 2.0])).unwrap() - 2.0).abs() < 1e-14);
        assert!((metric_variance(&pts(&[1.0, 2.0, 3.0])).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(metric_variance(&pts(&[1.0])).unwrap_err(), Error::TooFewTrajectories(1));
    }

    #[test]
    fn metric_correlation_examples() {
        let pts = |v: &[f64]| v.iter().map(|&x| ObjectPoint::scalar(x).unwrap()).collect::<Vec<_>>();
        let u = pts(&[0.0, 1.0, 2.0, 5.0]);
        assert_eq!(metric_correlation(&u, &u).unwrap(), 1.0);
        let neg = pts(&[0.0, -1.0, -2.0, -5.0]);
        assert!((metric_correlation(&u, &neg).unwrap() + 1.0).abs() < 1e-12);
        // Pearson of {(0,1),(1,0),(2,2)} = 1 / sqrt(2·2)
        let r = metric_correlation(&pts(&[0.0, 1.0, 2.0]), &pts(&[1.0, 0.0, 2.0])).unwrap();
        assert!((r - 0.5).abs() < 1e-10);
        let c = pts(&[3.0, 3.0, 3.0]);
        assert_eq!(metric_correlation(&u[..3], &c).unwrap_err(), Error::DegenerateVariance);
    }

    #[test]
    fn total_variance_examples() {
        let grid = uniform_grid(11);
        let zero = KernelSurface::new(grid.clone(), DMatrix::zeros(11, 11)).unwrap();
        assert_eq!(total_variance(&zero), 0.0);

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rows = random_rows(&mut rng, 12, 11);
        let c = estimate_cov_surface(&scalar_sample(&rows)).unwrap();
        let oracle = classical_cov(&rows);
        let w = trapezoid_weights(&grid);
        let expect: f64 = (0..11).map(|k| w[k] * oracle[(k, k)]).sum();
        assert!((total_variance(&c) - expect).abs() < 1e-10);
    }

    #[test]
    fn distance_covariance_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 200;
        let col: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        // second column: a fixed derangement-like shuffle of independent draws
        let other: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let rows: Vec<Vec<f64>> = (0..n).map(|i| vec![col[i], other[i], 0.5]).collect();
        let c = distance_cov_surface(&scalar_sample(&rows)).unwrap();
        assert!(c.get(0, 1).abs() <= 0.1);
        assert!(c.get(0, 0) > 0.0);
        assert!(c.get(2, 2).abs() < 1e-15);
        assert!(c.get(0, 2).abs() < 1e-15);
    }
}
