//! Argument definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{Format, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "orbitope-lab", version, about = "Faces, bounds and radii of the symmetric moment curve orbitope")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Number of frequency pairs; the curve lives in R^(2k).
    #[arg(long)]
    pub k: usize,
    #[arg(long = "tol", default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 64)]
    pub starts: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl From<Common> for RunConfig {
    fn from(c: Common) -> Self {
        Self {
            k: c.k,
            tolerance: c.tolerance,
            seed: c.seed,
            starts: c.starts,
            output_format: c.format,
            output_path: c.out,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Curve point and derivative at t.
    Eval {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        /// Derivative order of the reported value; the next derivative is
        /// reported alongside.
        #[arg(long, default_value_t = 0)]
        deriv: u32,
    },
    /// Builds the tangent hyperplane of a pattern and certifies its face.
    FaceCheck {
        #[command(flatten)]
        common: Common,
        /// Comma-separated tangency points in radians.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        points: Vec<f64>,
        /// Comma-separated even multiplicities summing to 2k.
        #[arg(long, value_delimiter = ',', required = true)]
        mults: Vec<u32>,
    },
    /// Brackets the largest neighborly arc length.
    Phi {
        #[command(flatten)]
        common: Common,
        /// Report the closed-form bound without searching.
        #[arg(long)]
        bound_only: bool,
        /// Width of the bisection bracket.
        #[arg(long, default_value_t = 1e-3)]
        bracket: f64,
        /// One row per k = 1..=K instead of a single row.
        #[arg(long)]
        table: bool,
    },
    /// Gap-function root against the separation bounds for k = 1..=K.
    Bounds {
        #[command(flatten)]
        common: Common,
    },
    /// Multi-start inradius estimate.
    Inradius {
        #[command(flatten)]
        common: Common,
    },
    /// Roots on the circle of a support polynomial, given by a tangency
    /// pattern or by a functional `<normal, x(t)> - offset`.
    Roots {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "mults", conflicts_with = "normal")]
        points: Vec<f64>,
        #[arg(long, value_delimiter = ',', requires = "points")]
        mults: Vec<u32>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required_unless_present = "points")]
        normal: Vec<f64>,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0, conflicts_with = "points")]
        offset: f64,
    },
}
