//! Batch command-line interface.
//!
//! Exit codes: 0 on success (including partial fits, flagged by their
//! `status` field), 2 for input errors, 3 for numerical failures.

pub mod files;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::fpca::{fit, score_trajectories, FitOptions};
use crate::quadrature::uniform_grid;
use crate::sim::{mise_report, simulate_distributions, simulate_networks, Design, DistSimConfig, MiseConfig, NetSimConfig, TruthSpec};
use crate::spaces::SpaceTag;
use files::{eigenfunctions_csv, from_json, mean_csv, scores_csv, surface_csv, to_json, FitArtifact, TrajectoryFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ofpca", version, about = "Functional PCA for object-valued curves")]
pub struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "OFPCA_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate the covariance surface, eigenfunctions, mean and scores.
    Fit(FitArgs),
    /// Draw a sample from one of the built-in simulation designs.
    Simulate(SimulateArgs),
    /// Monte-Carlo error table for a simulation design.
    Mise(MiseArgs),
    /// Score trajectories against a saved fit.
    Scores(ScoresArgs),
    /// Write plot-ready CSVs from a saved fit.
    ExportPlots(ExportArgs),
}

#[derive(Debug, Args)]
pub struct LoadArgs {
    /// Trajectory file (JSON), or `-` for stdin.
    pub input: PathBuf,
    /// Require the file to declare this space.
    #[arg(long)]
    pub space: Option<SpaceTag>,
    /// Replace objects that violate their space's constraints by their
    /// projection instead of rejecting the file.
    #[arg(long)]
    pub project_on_load: bool,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub load: LoadArgs,
    /// Number of components to retain.
    #[arg(long, short = 'k', default_value_t = 4)]
    pub components: usize,
    /// Keep the fewest components explaining at least this fraction.
    #[arg(long)]
    pub explained_threshold: Option<f64>,
    /// Report negative retained eigenvalues as zero (the raw spectrum is kept).
    #[arg(long)]
    pub clip_negative_eigenvalues: bool,
    /// Also compute object FPCs for every trajectory and component.
    #[arg(long)]
    pub fpc_objects: bool,
    /// Output directory; without it fit.json goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// `dist` (Gaussian distributions) or `net` (two-community networks).
    #[arg(long)]
    pub design: Design,
    #[arg(long, short = 'n', default_value_t = 100)]
    pub n: usize,
    /// Time-grid size.
    #[arg(long = "grid-size", short = 'T', default_value_t = 51)]
    pub grid_size: usize,
    /// Quantile levels per distribution.
    #[arg(long, default_value_t = 100)]
    pub quantile_size: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory; without it the sample goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MiseArgs {
    /// `dist` (Gaussian distributions) or `net` (two-community networks).
    #[arg(long)]
    pub design: Design,
    /// Comma-separated sample sizes.
    #[arg(long = "n", value_delimiter = ',', default_values_t = vec![25, 50, 100])]
    pub n_values: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    pub runs: usize,
    #[arg(long = "grid-size", short = 'T', default_value_t = 51)]
    pub grid_size: usize,
    #[arg(long, default_value_t = 100)]
    pub quantile_size: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Decompose the true surface instead of estimates (all errors vanish).
    #[arg(long)]
    pub truth_fed: bool,
    /// Output directory for mise.csv; without it the table goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScoresArgs {
    /// A fit.json produced by `fit`.
    #[arg(long)]
    pub fit: PathBuf,
    #[command(flatten)]
    pub load: LoadArgs,
    /// Output directory for scores.csv; without it the scores go to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// A fit.json produced by `fit`.
    pub fit: PathBuf,
    /// Directory for surface.csv, eigenfunctions.csv, scores.csv and mean.csv.
    #[arg(long)]
    pub out: PathBuf,
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match run(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_input_error() {
                EXIT_INPUT
            } else {
                EXIT_NUMERIC
            }
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::InvalidConfig("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    pool.install(|| match cli.command {
        Command::Fit(a) => cmd_fit(&a),
        Command::Simulate(a) => cmd_simulate(&a),
        Command::Mise(a) => cmd_mise(&a),
        Command::Scores(a) => cmd_scores(&a),
        Command::ExportPlots(a) => cmd_export_plots(&a),
    })
}

fn read_input(path: &Path) -> Result<String> {
    let mut text = String::new();
    if path == Path::new("-") {
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Error::InvalidConfig(format!("stdin: {e}")))?;
    } else {
        text = fs::read_to_string(path).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
    }
    Ok(text)
}

fn load_trajectories(load: &LoadArgs) -> Result<TrajectoryFile> {
    let file: TrajectoryFile = from_json(&read_input(&load.input)?, &load.input.display().to_string())?;
    if let Some(want) = load.space {
        if want != file.space {
            return Err(Error::InvalidConfig(format!("space: file declares '{}', --space asks for '{want}'", file.space)));
        }
    }
    Ok(file)
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::InvalidConfig(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))
}

fn write_stdout(contents: &str) -> Result<()> {
    io::stdout()
        .lock()
        .write_all(contents.as_bytes())
        .map_err(|e| Error::InvalidConfig(format!("stdout: {e}")))
}

fn write_plot_files(dir: &Path, artifact: &FitArtifact) -> Result<()> {
    write_file(dir, "surface.csv", &surface_csv(artifact))?;
    write_file(dir, "eigenfunctions.csv", &eigenfunctions_csv(artifact))?;
    write_file(dir, "scores.csv", &scores_csv(&artifact.scores, artifact.eigenvalues.len()))?;
    write_file(dir, "mean.csv", &mean_csv(artifact))
}

pub fn cmd_fit(a: &FitArgs) -> Result<()> {
    let sample = load_trajectories(&a.load)?.to_sample(a.load.project_on_load)?;
    let opts = FitOptions {
        components: a.components,
        explained_threshold: a.explained_threshold,
        clip_negative: a.clip_negative_eigenvalues,
        object_fpcs: a.fpc_objects,
    };
    let fitted = fit(&sample, &opts)?;
    let artifact = FitArtifact::from_fit(&fitted, sample.len());
    for w in &artifact.warnings {
        eprintln!("warning: {w}");
    }
    let json = to_json(&artifact)?;
    match &a.out {
        Some(dir) => {
            write_file(dir, "fit.json", &json)?;
            write_plot_files(dir, &artifact)
        }
        None => write_stdout(&json),
    }
}

pub fn cmd_simulate(a: &SimulateArgs) -> Result<()> {
    let sample = match a.design {
        Design::Distributions => simulate_distributions(&DistSimConfig::new(a.n, a.grid_size, a.quantile_size, a.seed))?,
        Design::Networks => simulate_networks(&NetSimConfig::new(a.n, a.grid_size, a.seed))?,
    };
    let json = to_json(&TrajectoryFile::from_sample(&sample))?;
    match &a.out {
        Some(dir) => write_file(dir, "trajectories.json", &json),
        None => write_stdout(&json),
    }
}

pub fn cmd_mise(a: &MiseArgs) -> Result<()> {
    let cfg = MiseConfig {
        design: a.design,
        n_values: a.n_values.clone(),
        grid_size: a.grid_size,
        quantile_size: a.quantile_size,
        runs: a.runs,
        seed: a.seed,
        truth_fed: a.truth_fed,
    };
    let truth = TruthSpec::for_design(a.design, &uniform_grid(a.grid_size))?;
    let csv = mise_report(&cfg, &truth)?.to_csv();
    match &a.out {
        Some(dir) => write_file(dir, "mise.csv", &csv),
        None => write_stdout(&csv),
    }
}

pub fn cmd_scores(a: &ScoresArgs) -> Result<()> {
    let artifact: FitArtifact = from_json(&read_input(&a.fit)?, &a.fit.display().to_string())?;
    let file = load_trajectories(&a.load)?;
    let trajs = file.trajectories_checked(a.load.project_on_load)?;
    let scores = score_trajectories(&trajs, &artifact.mean_trajectory()?, &artifact.eigen_system()?)?;
    let csv = scores_csv(&scores, artifact.eigenvalues.len());
    match &a.out {
        Some(dir) => write_file(dir, "scores.csv", &csv),
        None => write_stdout(&csv),
    }
}

pub fn cmd_export_plots(a: &ExportArgs) -> Result<()> {
    let artifact: FitArtifact = from_json(&read_input(&a.fit)?, &a.fit.display().to_string())?;
    artifact.surface()?;
    write_plot_files(&a.out, &artifact)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flags() {
        let cli = Cli::try_parse_from([
            "ofpca", "fit", "in.json", "--space", "quantile", "-k", "3", "--fpc-objects",
            "--clip-negative-eigenvalues", "--project-on-load", "--out", "o", "--threads", "2",
        ])
        .unwrap();
        assert_eq!(cli.threads, Some(2));
        let Command::Fit(f) = cli.command else { panic!() };
        assert_eq!(f.components, 3);
        assert_eq!(f.load.space, Some(SpaceTag::Quantile));
        assert!(f.fpc_objects && f.clip_negative_eigenvalues && f.load.project_on_load);

        let cli = Cli::try_parse_from(["ofpca", "mise", "--design", "net", "--n", "25,100", "--runs", "3"]).unwrap();
        let Command::Mise(m) = cli.command else { panic!() };
        assert_eq!(m.n_values, vec![25, 100]);
        assert_eq!(m.design, Design::Networks);
    }

    #[test]
    fn bad_arguments_exit_with_input_code() {
        assert_eq!(main_with_args(["ofpca", "simulate", "--design", "blob"]), EXIT_INPUT);
        assert_eq!(main_with_args(["ofpca", "fit", "/nonexistent/x.json"]), EXIT_INPUT);
    }
}
