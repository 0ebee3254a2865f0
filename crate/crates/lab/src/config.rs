//! Run configuration: a TOML file merged with command-line overrides.

use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::Deserialize;

use enstrophy_core::exact_solver::SolverConfig;
use enstrophy_core::profiles::{make_custom_profile, make_sine_profile, CustomShape, Profile};

use crate::harness::DEFAULT_K_LIST;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Solve,
    Asym,
    Sweep,
    Validate,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Solve => "solve",
            Mode::Asym => "asym",
            Mode::Sweep => "sweep",
            Mode::Validate => "validate",
        }
    }
}

/// Initial-condition shape: the builtin sine or `f = -Σ a_n sin(2πnx)`.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileSpec {
    Sine,
    Series(Vec<f64>),
}

impl ProfileSpec {
    /// Parses `sine` or `series:a1,a2,...`.
    pub fn parse(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s == "sine" {
            return Ok(Self::Sine);
        }
        let Some(rest) = s.strip_prefix("series:") else {
            return Err(format!("unknown profile {s:?}; expected \"sine\" or \"series:a1,a2,...\""));
        };
        parse_list(rest).map(Self::Series)
    }

    pub fn build(&self) -> Result<Profile, String> {
        match self {
            Self::Sine => Ok(make_sine_profile()),
            Self::Series(c) => make_custom_profile(CustomShape::SineSeries(c.clone())).map_err(|e| e.to_string()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Sine => "sine".into(),
            Self::Series(c) => {
                let parts: Vec<String> = c.iter().map(|v| format!("{v:?}")).collect();
                format!("series:{}", parts.join(","))
            }
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("bad number {p:?}: {e}")))
        .collect()
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileSolver {
    quad_tolerance: Option<f64>,
    grid_size: Option<usize>,
    domain_halfwidth: Option<f64>,
    max_panels: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    mode: Option<Mode>,
    profile: Option<String>,
    coefficients: Option<Vec<f64>>,
    k: Option<f64>,
    k_list: Option<Vec<f64>>,
    t: Option<Vec<f64>>,
    out_dir: Option<PathBuf>,
    oracle: Option<bool>,
    solver: Option<FileSolver>,
}

/// Command-line flags; every flag overrides the config file.
#[derive(Debug, Clone, Default, Parser)]
#[command(name = "enstrophy-lab", version, about = "Exact Burgers solutions and enstrophy-growth sweeps")]
pub struct Cli {
    /// TOML configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// `sine` or `series:a1,a2,...`.
    #[arg(long)]
    pub profile: Option<String>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    #[arg(long)]
    pub k: Option<f64>,
    /// Comma-separated amplitudes for `sweep`.
    #[arg(long = "k-list")]
    pub k_list: Option<String>,
    /// Comma-separated times for `solve`.
    #[arg(long)]
    pub t: Option<String>,
    #[arg(long = "out-dir")]
    pub out_dir: Option<PathBuf>,
    #[arg(long = "quad-tol")]
    pub quad_tol: Option<f64>,
    #[arg(long = "grid-size")]
    pub grid_size: Option<usize>,
    /// Cross-check against the spectral solver where applicable.
    #[arg(long)]
    pub oracle: bool,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub profile: ProfileSpec,
    pub k: f64,
    pub k_list: Vec<f64>,
    /// Empty means the default times `t0/2, 2 t0, T*`.
    pub times: Vec<f64>,
    pub out_dir: PathBuf,
    pub oracle: bool,
    pub solver: SolverConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Sweep,
            profile: ProfileSpec::Sine,
            k: 20.0,
            k_list: DEFAULT_K_LIST.to_vec(),
            times: Vec::new(),
            out_dir: PathBuf::from("out"),
            oracle: false,
            solver: SolverConfig::default(),
        }
    }
}

impl RunConfig {
    /// Merges an optional config file and the flags over the defaults.
    pub fn resolve(cli: &Cli) -> Result<Self, String> {
        let file = match &cli.config {
            Some(path) => load_file(path)?,
            None => FileConfig::default(),
        };
        let mut rc = RunConfig::default();
        if let Some(m) = file.mode {
            rc.mode = m;
        }
        match (&file.profile, &file.coefficients) {
            (Some(_), Some(_)) => return Err("config sets both profile and coefficients".into()),
            (Some(p), None) => rc.profile = ProfileSpec::parse(p)?,
            (None, Some(c)) => rc.profile = ProfileSpec::Series(c.clone()),
            (None, None) => {}
        }
        if let Some(k) = file.k {
            rc.k = k;
        }
        if let Some(l) = file.k_list {
            rc.k_list = l;
        }
        if let Some(t) = file.t {
            rc.times = t;
        }
        if let Some(d) = file.out_dir {
            rc.out_dir = d;
        }
        if let Some(o) = file.oracle {
            rc.oracle = o;
        }
        if let Some(s) = file.solver {
            if let Some(v) = s.quad_tolerance {
                rc.solver.quad_tolerance = v;
            }
            if let Some(v) = s.grid_size {
                rc.solver.grid_size = v;
            }
            if let Some(v) = s.domain_halfwidth {
                rc.solver.domain_halfwidth = v;
            }
            if let Some(v) = s.max_panels {
                rc.solver.max_panels = v;
            }
        }

        if let Some(m) = cli.mode {
            rc.mode = m;
        }
        if let Some(p) = &cli.profile {
            rc.profile = ProfileSpec::parse(p)?;
        }
        if let Some(k) = cli.k {
            rc.k = k;
        }
        if let Some(l) = &cli.k_list {
            rc.k_list = parse_list(l)?;
        }
        if let Some(t) = &cli.t {
            rc.times = parse_list(t)?;
        }
        if let Some(d) = &cli.out_dir {
            rc.out_dir = d.clone();
        }
        if let Some(v) = cli.quad_tol {
            rc.solver.quad_tolerance = v;
        }
        if let Some(v) = cli.grid_size {
            rc.solver.grid_size = v;
        }
        rc.oracle |= cli.oracle;
        rc.check()?;
        Ok(rc)
    }

    fn check(&self) -> Result<(), String> {
        self.solver.validate().map_err(|e| e.to_string())?;
        if !(self.k > 0.0 && self.k.is_finite()) {
            return Err(format!("k must be positive, got {}", self.k));
        }
        if self.k_list.iter().any(|&k| !(k > 0.0 && k.is_finite())) {
            return Err("every entry of k_list must be positive".into());
        }
        if self.times.iter().any(|&t| !(t >= 0.0 && t.is_finite())) {
            return Err("times must be non-negative".into());
        }
        Ok(())
    }
}

fn load_file(path: &Path) -> Result<FileConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}
