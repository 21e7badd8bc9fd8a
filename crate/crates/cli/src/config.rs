//! Command-line arguments and the configuration echo written with every
//! result.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{CliError, CliResult};

#[derive(Parser, Debug)]
#[command(name = "cone-quantile", version, about = "Cone distribution functions, quantile regions and Galois closures")]
pub struct Cli {
    /// Geometric tolerance for sign tests.
    #[arg(long, global = true, default_value_t = cone_quantile_core::DEFAULT_TOL)]
    pub tol: f64,
    /// Number of directions sampled from the dual cone.
    #[arg(long, global = true, default_value_t = 64)]
    pub resolution: usize,
    /// Probe-grid points per axis.
    #[arg(long, global = true, default_value_t = cone_quantile_core::ProbeGrid::DEFAULT_PER_AXIS)]
    pub grid: usize,
    #[command(subcommand)]
    pub command: Command,
}

/// Where the distribution comes from.
#[derive(Args, Debug, Clone)]
pub struct DataArgs {
    /// Sample CSV: one point per row, optional header, optional final `weight` column.
    #[arg(long, value_name = "CSV", conflicts_with = "gaussian", required_unless_present = "gaussian")]
    pub data: Option<PathBuf>,
    /// Gaussian model JSON: {"mu": [...], "sigma": [[...], ...]}.
    #[arg(long, value_name = "JSON")]
    pub gaussian: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// `orthant`, `zero`, `halfspace:<w1,w2,...>` or a cone JSON file.
    #[arg(long, default_value = "orthant")]
    pub cone: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lower cone distribution function at query points.
    Cdf {
        #[command(flatten)]
        model: ModelArgs,
        /// Query points CSV.
        #[arg(long, value_name = "CSV")]
        points: PathBuf,
        /// Write JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Halfspace (Tukey) depth at query points.
    Depth {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_name = "CSV")]
        points: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quantile regions as halfspace lists, planar polygons and an SVG plot.
    Quantile {
        #[command(flatten)]
        model: ModelArgs,
        /// Level in [0, 1]; repeat for nested regions.
        #[arg(long = "p", required = true)]
        levels: Vec<f64>,
        /// Clip box `xmin,xmax,ymin,ymax` for polygons and plots.
        #[arg(long)]
        bbox: Option<String>,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Write JSON here instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Inf-extension and both closures of a generator set.
    Closure {
        #[command(flatten)]
        model: ModelArgs,
        /// Generator set JSON: {"G": [[...], ...], "rays": [[...], ...]}.
        #[arg(long = "G", value_name = "JSON")]
        generators: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compares two generator sets under both set orders.
    Rank {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_name = "JSON")]
        d1: PathBuf,
        #[arg(long, value_name = "JSON")]
        d2: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo capacity of a finite test set against its exact value.
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        /// Test set CSV.
        #[arg(long = "K", value_name = "CSV")]
        test_set: PathBuf,
        #[arg(long, default_value_t = 20_000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Per-draw CSV with columns `u,hit`.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the invariant battery on built-in fixtures.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct ModelEcho {
    pub source: &'static str,
    pub path: String,
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub weighted: bool,
}

/// Everything that determines a run's output.
#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cone: Option<String>,
    pub resolution: usize,
    pub tol: f64,
    pub grid: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub p: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bbox: Option<[f64; 4]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_draws: Option<usize>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub inputs: BTreeMap<&'static str, String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub outputs: BTreeMap<&'static str, String>,
}

pub fn path_string(p: &Path) -> String {
    p.display().to_string()
}

impl RunConfig {
    /// Echo with the global settings filled in; checked before any work.
    pub fn new(command: &'static str, cli: &Cli) -> CliResult<Self> {
        if !(cli.tol.is_finite() && cli.tol > 0.0) {
            return Err(CliError::input("tol", "must be a positive finite number"));
        }
        if cli.resolution == 0 {
            return Err(CliError::input("resolution", "must be at least 1"));
        }
        if cli.grid < 2 {
            return Err(CliError::input("grid", "must be at least 2"));
        }
        Ok(RunConfig {
            command,
            model: None,
            cone: None,
            resolution: cli.resolution,
            tol: cli.tol,
            grid: cli.grid,
            p: Vec::new(),
            bbox: None,
            seed: None,
            n_draws: None,
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
        })
    }

    pub fn input(&mut self, name: &'static str, path: &Path) {
        self.inputs.insert(name, path_string(path));
    }

    pub fn output(&mut self, name: &'static str, path: Option<&PathBuf>) {
        if let Some(p) = path {
            self.outputs.insert(name, path_string(p));
        }
    }
}

pub fn parse_levels(levels: &[f64]) -> CliResult<Vec<f64>> {
    for &p in levels {
        if !(0.0..=1.0).contains(&p) {
            return Err(CliError::input("p", format!("level {p} outside [0, 1]")));
        }
    }
    Ok(levels.to_vec())
}

/// `xmin,xmax,ymin,ymax`.
pub fn parse_bbox(s: &str) -> CliResult<[f64; 4]> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::input("bbox", format!("{e} in {s:?}")))?;
    match parts[..] {
        [a, b, c, d] if [a, b, c, d].iter().all(|x| x.is_finite()) && a < b && c < d => Ok([a, b, c, d]),
        _ => Err(CliError::input("bbox", "expected four finite numbers xmin,xmax,ymin,ymax with min < max")),
    }
}
