use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "memwave",
    version,
    about = "Dispersion and step responses for a Bessel-ratio memory kernel"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// κ and δ_att against ωτ
    Dispersion(SweepArgs),
    /// Phase and group velocities against ωτ
    Velocities(SweepArgs),
    /// Step response Y on an (x, ξ) grid
    StepResponse(StepArgs),
    /// Invert a catalogue transform, or Ỹ at one location
    Invert(InvertArgs),
    /// Run the built-in self checks and print a pass/fail table
    Validate(Common),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Front speed
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Relaxation time
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    /// Quadrature nodes for the inverse Laplace transform
    #[arg(long, default_value_t = 48)]
    pub nodes: usize,
    #[arg(long, value_enum, default_value_t = Contour::Parabolic)]
    pub contour: Contour,
    /// Output file (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Re-read the output and check every row
    #[arg(long)]
    pub audit: bool,
    /// Report physical rather than non-dimensional quantities
    #[arg(long)]
    pub dimensional: bool,
}

#[derive(Args, Debug, Clone)]
pub struct Spacing {
    /// Logarithmic grid spacing
    #[arg(long, conflicts_with = "linear")]
    pub log: bool,
    /// Linear grid spacing
    #[arg(long)]
    pub linear: bool,
}

impl Spacing {
    pub fn resolve(&self, default_log: bool) -> bool {
        if self.log {
            true
        } else if self.linear {
            false
        } else {
            default_log
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    /// ωτ grid as lo:hi:n [default: 1e-3:1e3:200, log]
    #[arg(long)]
    pub omega_tau: Option<GridSpec>,
    #[command(flatten)]
    pub spacing: Spacing,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct StepArgs {
    /// Comma-separated locations x/(cτ)
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,1")]
    pub x_over_ctau: Vec<f64>,
    /// ξ = (ct − x)/(cτ) grid as lo:hi:n [default: 0:10:400, linear]
    #[arg(long, allow_hyphen_values = true)]
    pub xi: Option<GridSpec>,
    #[command(flatten)]
    pub spacing: Spacing,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct InvertArgs {
    /// step, exponential, ramp, sine, erfc, delayed-step, or y-tilde
    #[arg(long, default_value = "erfc")]
    pub transform: String,
    /// Time grid as lo:hi:n [default: 1e-2:1e2:41, log]
    #[arg(long)]
    pub t: Option<GridSpec>,
    /// Location x/(cτ) for y-tilde
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub x_over_ctau: Vec<f64>,
    #[command(flatten)]
    pub spacing: Spacing,
    #[command(flatten)]
    pub common: Common,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Contour {
    Talbot,
    Parabolic,
}

impl fmt::Display for Contour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Contour::Talbot => "talbot",
            Contour::Parabolic => "parabolic",
        })
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Tsv,
}

impl Format {
    pub fn separator(self) -> char {
        match self {
            Format::Csv => ',',
            Format::Tsv => '\t',
        }
    }
}

/// `lo:hi:n`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts.as_slice() else {
            return Err(format!("expected lo:hi:n, got {s:?}"));
        };
        let lo: f64 = lo
            .trim()
            .parse()
            .map_err(|e| format!("bad lower bound {lo:?}: {e}"))?;
        let hi: f64 = hi
            .trim()
            .parse()
            .map_err(|e| format!("bad upper bound {hi:?}: {e}"))?;
        let n: usize = n
            .trim()
            .parse()
            .map_err(|e| format!("bad count {n:?}: {e}"))?;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(format!(
                "grid bounds must be finite with lo < hi, got {lo}:{hi}"
            ));
        }
        if n < 2 {
            return Err(format!("grid needs at least 2 points, got {n}"));
        }
        Ok(GridSpec { lo, hi, n })
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.n)
    }
}

impl GridSpec {
    pub fn points(&self, log: bool) -> Result<Vec<f64>, String> {
        if log {
            if self.lo <= 0.0 {
                return Err(format!("log grid needs positive bounds, got {self}"));
            }
            let (a, b) = (self.lo.ln(), self.hi.ln());
            Ok((0..self.n)
                .map(|i| {
                    if i == 0 {
                        self.lo
                    } else if i + 1 == self.n {
                        self.hi
                    } else {
                        (a + (b - a) * i as f64 / (self.n - 1) as f64).exp()
                    }
                })
                .collect())
        } else {
            Ok((0..self.n)
                .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64)
                .collect())
        }
    }
}
