//! On-disk formats: trajectory input files, fit artifacts and plot CSVs.

use std::io;

use serde::{Deserialize, Serialize};

use crate::eigen::{explained_fraction, EigenSystem};
use crate::error::{Error, Result};
use crate::fpca::FpcaFit;
use crate::kernel::{KernelSurface, ObjectSample, ObjectTrajectory};
use crate::spaces::{project, ObjectPoint, SpaceKind, SpaceTag};
use crate::text::format_float;

/// A sample of object-valued trajectories on a shared grid. Each object is
/// stored as a flat array: one value for scalars, `m` quantiles, or an
/// `r × r` matrix in row-major order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectoryFile {
    pub space: SpaceTag,
    pub dim: usize,
    pub time_grid: Vec<f64>,
    pub trajectories: Vec<Vec<Vec<f64>>>,
}

impl TrajectoryFile {
    pub fn from_sample(sample: &ObjectSample) -> Self {
        let space = sample.space();
        TrajectoryFile {
            space: space.tag(),
            dim: space.dim(),
            time_grid: sample.time_grid().to_vec(),
            trajectories: sample
                .trajectories()
                .iter()
                .map(|tr| tr.points().iter().map(|p| p.data().to_vec()).collect())
                .collect(),
        }
    }

    pub fn space_kind(&self) -> Result<SpaceKind> {
        SpaceKind::new(self.space, self.dim).map_err(|e| at("dim", e))
    }

    /// Validates every object, naming the offending path on failure. With
    /// `project_on_load`, objects violating their space's constraints are
    /// replaced by their projection instead of rejected.
    pub fn trajectories_checked(&self, project_on_load: bool) -> Result<Vec<ObjectTrajectory>> {
        let space = self.space_kind()?;
        if self.trajectories.is_empty() {
            return Err(Error::EmptyInput);
        }
        self.trajectories
            .iter()
            .enumerate()
            .map(|(i, tr)| {
                if tr.len() != self.time_grid.len() {
                    return Err(Error::InvalidObject(format!(
                        "trajectories[{i}]: {} objects for a grid of {} times",
                        tr.len(),
                        self.time_grid.len()
                    )));
                }
                let points = tr
                    .iter()
                    .enumerate()
                    .map(|(k, data)| load_point(space, data, project_on_load).map_err(|e| at(&format!("trajectories[{i}][{k}]"), e)))
                    .collect::<Result<Vec<_>>>()?;
                ObjectTrajectory::new(space, self.time_grid.clone(), points).map_err(|e| at("time_grid", e))
            })
            .collect()
    }

    pub fn to_sample(&self, project_on_load: bool) -> Result<ObjectSample> {
        ObjectSample::new(self.trajectories_checked(project_on_load)?)
    }
}

fn load_point(space: SpaceKind, data: &[f64], project_on_load: bool) -> Result<ObjectPoint> {
    match ObjectPoint::new(space, data.to_vec()) {
        Ok(p) => Ok(p),
        Err(Error::InvalidObject(_)) if project_on_load && data.len() == space.data_len() && data.iter().all(|v| v.is_finite()) => {
            project(space, data)
        }
        Err(e) => Err(e),
    }
}

/// Prefixes a location to error messages that carry one.
fn at(path: &str, e: Error) -> Error {
    match e {
        Error::InvalidObject(msg) => Error::InvalidObject(format!("{path}: {msg}")),
        Error::InvalidGrid(msg) => Error::InvalidGrid(format!("{path}: {msg}")),
        Error::InvalidConfig(msg) => Error::InvalidConfig(format!("{path}: {msg}")),
        other => other,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitStatus {
    Ok,
    /// Some requested outputs could not be computed; see `warnings`.
    Partial,
}

/// Everything a fit produces, in a self-describing JSON bundle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitArtifact {
    pub status: FitStatus,
    pub warnings: Vec<String>,
    pub space: SpaceTag,
    pub dim: usize,
    pub n: usize,
    pub time_grid: Vec<f64>,
    pub quad_weights: Vec<f64>,
    /// `surface[s][t]`.
    pub surface: Vec<Vec<f64>>,
    pub eigenvalues: Vec<f64>,
    /// Full raw spectrum, descending.
    pub spectrum: Vec<f64>,
    pub clipped: bool,
    /// `eigenfunctions[k][t]`.
    pub eigenfunctions: Vec<Vec<f64>>,
    /// `None` when the spectrum has no positive mass.
    pub explained_fractions: Option<Vec<f64>>,
    /// `mean[t]`, one object per grid time.
    pub mean: Vec<Vec<f64>>,
    /// `scores[i][k]`.
    pub scores: Vec<Vec<f64>>,
    /// `object_fpcs[i][k]`, `None` where the component was skipped.
    pub object_fpcs: Option<Vec<Vec<Option<Vec<f64>>>>>,
}

impl FitArtifact {
    pub fn from_fit(fit: &FpcaFit, n: usize) -> Self {
        let mut warnings = fit.warnings.clone();
        let mut status = FitStatus::Ok;
        let es = &fit.eigen;
        let explained_fractions = match (0..es.num_retained()).map(|j| explained_fraction(es, j)).collect::<Result<Vec<_>>>() {
            Ok(v) => Some(v),
            Err(e) => {
                warnings.push(format!("explained fractions unavailable: {e}"));
                status = FitStatus::Partial;
                None
            }
        };
        let object_fpcs = fit.object_fpcs.as_ref().map(|rows| {
            rows.iter()
                .map(|row| row.iter().map(|p| p.as_ref().map(|p| p.data().to_vec())).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        });
        if let Some(rows) = &object_fpcs {
            if rows.iter().flatten().any(Option::is_none) {
                status = FitStatus::Partial;
            }
        }
        let space = fit.mean.space();
        let values = fit.surface.values();
        let t = fit.surface.grid_len();
        FitArtifact {
            status,
            warnings,
            space: space.tag(),
            dim: space.dim(),
            n,
            time_grid: fit.surface.time_grid().to_vec(),
            quad_weights: fit.surface.quad_weights().to_vec(),
            surface: (0..t).map(|s| (0..t).map(|u| values[(s, u)]).collect()).collect(),
            eigenvalues: es.eigenvalues().to_vec(),
            spectrum: es.spectrum().to_vec(),
            clipped: es.clipped(),
            eigenfunctions: es.eigenfunctions().to_vec(),
            explained_fractions,
            mean: fit.mean.points().iter().map(|p| p.data().to_vec()).collect(),
            scores: fit.scores.clone(),
            object_fpcs,
        }
    }

    pub fn space_kind(&self) -> Result<SpaceKind> {
        SpaceKind::new(self.space, self.dim)
    }

    pub fn surface(&self) -> Result<KernelSurface> {
        let t = self.time_grid.len();
        if self.surface.len() != t || self.surface.iter().any(|r| r.len() != t) {
            return Err(Error::InvalidSurface("surface is not T × T".into()));
        }
        let values = nalgebra::DMatrix::from_fn(t, t, |s, u| self.surface[s][u]);
        KernelSurface::new(self.time_grid.clone(), values)
    }

    pub fn eigen_system(&self) -> Result<EigenSystem> {
        EigenSystem::from_parts(
            self.eigenvalues.clone(),
            self.spectrum.clone(),
            self.eigenfunctions.clone(),
            self.time_grid.clone(),
            self.quad_weights.clone(),
            self.clipped,
        )
    }

    pub fn mean_trajectory(&self) -> Result<ObjectTrajectory> {
        let space = self.space_kind()?;
        let points = self
            .mean
            .iter()
            .enumerate()
            .map(|(k, d)| ObjectPoint::new(space, d.clone()).map_err(|e| at(&format!("mean[{k}]"), e)))
            .collect::<Result<Vec<_>>>()?;
        ObjectTrajectory::new(space, self.time_grid.clone(), points)
    }
}

/// Pretty JSON with every float written to 17 significant digits.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, ExactFloats::default());
    value
        .serialize(&mut ser)
        .map_err(|e| Error::InvalidConfig(format!("serialization failed: {e}")))?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

/// Parses JSON, reporting serde's line/column diagnostics as input errors.
pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidConfig(format!("{what}: {e}")))
}

#[derive(Default)]
struct ExactFloats(serde_json::ser::PrettyFormatter<'static>);

impl serde_json::ser::Formatter for ExactFloats {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_float(value).as_bytes())
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Long format `s,t,value`.
pub fn surface_csv(a: &FitArtifact) -> String {
    let mut out = String::from("s,t,value\n");
    for (s, row) in a.time_grid.iter().zip(&a.surface) {
        for (t, v) in a.time_grid.iter().zip(row) {
            push_row(&mut out, &[*s, *t, *v]);
        }
    }
    out
}

/// `t,phi1..phiK`.
pub fn eigenfunctions_csv(a: &FitArtifact) -> String {
    let mut out = String::from("t");
    for k in 1..=a.eigenfunctions.len() {
        out.push_str(&format!(",phi{k}"));
    }
    out.push('\n');
    for (idx, t) in a.time_grid.iter().enumerate() {
        let mut row = vec![*t];
        row.extend(a.eigenfunctions.iter().map(|f| f[idx]));
        push_row(&mut out, &row);
    }
    out
}

/// `i,beta1..betaK` with 0-based trajectory index.
pub fn scores_csv(scores: &[Vec<f64>], k: usize) -> String {
    let mut out = String::from("i");
    for j in 1..=k {
        out.push_str(&format!(",beta{j}"));
    }
    out.push('\n');
    for (i, row) in scores.iter().enumerate() {
        out.push_str(&i.to_string());
        for v in row {
            out.push(',');
            out.push_str(&format_float(*v));
        }
        out.push('\n');
    }
    out
}

/// `t,x1..xL`: the mean trajectory, one flattened object per row.
pub fn mean_csv(a: &FitArtifact) -> String {
    let width = a.mean.first().map_or(0, Vec::len);
    let mut out = String::from("t");
    for l in 1..=width {
        out.push_str(&format!(",x{l}"));
    }
    out.push('\n');
    for (t, obj) in a.time_grid.iter().zip(&a.mean) {
        let mut row = vec![*t];
        row.extend(obj);
        push_row(&mut out, &row);
    }
    out
}

fn push_row(out: &mut String, values: &[f64]) {
    for (j, v) in values.iter().enumerate() {
        if j > 0 {
            out.push(',');
        }
        out.push_str(&format_float(*v));
    }
    out.push('\n');
}
