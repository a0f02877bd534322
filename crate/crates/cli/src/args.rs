//! Command-line flags and the optional key-value config file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// All sixteen eigenvalues at one (γ, Δ, Γ), closed form against numeric.
    Spectrum,
    /// Eigenvalue branches along a Γ range at fixed (γ, Δ).
    Sweep,
    /// Exceptional points of both blocks on a (γ, Δ) grid.
    LepmScan,
    /// Γ_cr and its region label on a (γ, Δ) grid.
    PhaseDiagram,
    /// Curves Δ(γ) separating the Σ₋ region from the planes.
    Boundary,
    /// Distance to the final steady state after a sudden parameter change.
    Quench,
    /// Pairing of the spectrum with its large-Γ stripe values.
    ZenoCheck,
    /// Eigenvalue clusters with algebraic and geometric multiplicities.
    Jordan,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Spectrum => "spectrum",
            Command::Sweep => "sweep",
            Command::LepmScan => "lepm-scan",
            Command::PhaseDiagram => "phase-diagram",
            Command::Boundary => "boundary",
            Command::Quench => "quench",
            Command::ZenoCheck => "zeno-check",
            Command::Jordan => "jordan",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Norm {
    #[default]
    Frobenius,
    Spectral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SideArg {
    Left,
    Right,
    #[default]
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockArg {
    Plus,
    Minus,
    #[default]
    Both,
}

/// Grid `a:b:n`, linear unless `--log-scale` is set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub end: f64,
    pub n: usize,
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts[..] else {
            return Err(format!("expected a:b:n, got '{s}'"));
        };
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("'{t}' is not a finite number"))
        };
        let n = n
            .trim()
            .parse::<usize>()
            .map_err(|_| format!("'{n}' is not a sample count"))?;
        if n == 0 {
            return Err(format!("range '{s}' is empty"));
        }
        Ok(Range {
            start: num(a)?,
            end: num(b)?,
            n,
        })
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.end, self.n)
    }
}

impl Range {
    pub fn points(&self, log: bool) -> Result<Vec<f64>, CliError> {
        if self.n == 1 {
            return Ok(vec![self.start]);
        }
        if log && !(self.start > 0.0 && self.end > 0.0) {
            return Err(CliError::Invalid(format!(
                "log-scaled range {self} needs positive end points"
            )));
        }
        let last = (self.n - 1) as f64;
        Ok((0..self.n)
            .map(|k| {
                let t = k as f64 / last;
                // End points stay exact.
                if k == 0 {
                    self.start
                } else if k + 1 == self.n {
                    self.end
                } else if log {
                    (self.start.ln() * (1.0 - t) + self.end.ln() * t).exp()
                } else {
                    self.start * (1.0 - t) + self.end * t
                }
            })
            .collect())
    }
}

impl Serialize for Range {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Range {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// One value or a comma-separated list.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct FloatList(pub Vec<f64>);

impl FromStr for FloatList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("'{t}' is not a number"))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(FloatList)
    }
}

impl<'de> Deserialize<'de> for FloatList {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            One(f64),
            Many(Vec<f64>),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::One(v) => Ok(FloatList(vec![v])),
            Raw::Many(v) => Ok(FloatList(v)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Every flag of every subcommand. Flags a subcommand does not use are
/// ignored by it, so one config file can carry a whole figure recipe.
#[derive(Debug, Clone, Default, Parser, Serialize, Deserialize)]
#[command(name = "lepm", version, about, allow_negative_numbers = true)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Args {
    #[command(subcommand)]
    pub command: Option<Command>,

    /// Key-value TOML file with flag names as keys; flags override it.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Anisotropy γ.
    #[arg(long, global = true)]
    pub gamma: Option<f64>,
    /// z-coupling Δ.
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    /// Dissipation strength Γ, or a comma-separated list for zeno-check.
    #[arg(long = "Gamma", global = true, value_name = "G[,G...]")]
    #[serde(rename = "Gamma")]
    pub big_gamma: Option<FloatList>,

    #[arg(long, global = true, allow_hyphen_values = true, value_name = "A:B:N")]
    pub gamma_range: Option<Range>,
    #[arg(long, global = true, allow_hyphen_values = true, value_name = "A:B:N")]
    pub delta_range: Option<Range>,
    #[arg(long = "Gamma-range", global = true, allow_hyphen_values = true, value_name = "A:B:N")]
    #[serde(rename = "Gamma-range")]
    pub big_gamma_range: Option<Range>,
    /// Space every range logarithmically.
    #[arg(long, global = true)]
    pub log_scale: bool,
    /// Divide Re λ by Γ in sweeps.
    #[arg(long, global = true)]
    pub rescale: bool,

    /// Anisotropy before the quench.
    #[arg(long, global = true)]
    pub gamma_i: Option<f64>,
    /// Anisotropy after the quench.
    #[arg(long, global = true)]
    pub gamma_f: Option<f64>,
    /// Dissipation before the quench (defaults to --Gamma).
    #[arg(long = "Gamma-i", global = true, value_name = "G")]
    #[serde(rename = "Gamma-i")]
    pub big_gamma_i: Option<f64>,
    /// Dissipation after the quench (defaults to --Gamma).
    #[arg(long = "Gamma-f", global = true, value_name = "G")]
    #[serde(rename = "Gamma-f")]
    pub big_gamma_f: Option<f64>,
    #[arg(long, global = true)]
    pub t_max: Option<f64>,
    /// Time samples in a quench, or boundary samples per side.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Relaxation threshold for t*.
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub norm: Option<Norm>,
    #[arg(long, global = true, value_enum)]
    pub side: Option<SideArg>,
    #[arg(long, global = true, value_enum)]
    pub block: Option<BlockArg>,

    /// Residual bound for accepting a root of the exceptional-point polynomial.
    #[arg(long, global = true)]
    pub tol_root: Option<f64>,
    /// Smallest |Δ| admitted in scans.
    #[arg(long, global = true)]
    pub delta_floor: Option<f64>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Worker threads for grid scans.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Recorded with the run configuration.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

macro_rules! fill {
    ($dst:ident, $src:ident; $($field:ident),*) => {
        $( if $dst.$field.is_none() { $dst.$field = $src.$field; } )*
    };
}

impl Args {
    /// Fills every flag left unset from `file`.
    pub fn merge(mut self, file: Args) -> Args {
        fill!(self, file; command, gamma, delta, big_gamma, gamma_range, delta_range,
            big_gamma_range, gamma_i, gamma_f, big_gamma_i, big_gamma_f, t_max, samples,
            epsilon, norm, side, block, tol_root, delta_floor, format, threads, seed);
        self.log_scale |= file.log_scale;
        self.rescale |= file.rescale;
        self
    }

    pub fn load_config(path: &Path) -> Result<Args, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Invalid(format!("bad config {}: {e}", path.display())))
    }
}
