use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ckn_core::param_space::{from_cylinder, to_cylinder};
use ckn_core::ParamPoint;

use crate::CliError;

pub const DEFAULT_SEED: u64 = 20_110_915;

#[derive(Debug, Parser)]
#[command(name = "ckn", version, about = "Sharp constants and symmetry diagnostics for weighted interpolation inequalities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form constants at a parameter point and/or a Lieb-Thirring exponent.
    Constants(ConstantsArgs),
    /// Symmetry classification of an (a, b) grid.
    RegionMap(RegionArgs),
    /// Numerical checks; exit 0 on pass, 1 on fail.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// A parameter point given either as (N, a, b) or as (N, p, Lambda).
#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    /// Dimension.
    #[arg(long = "N", short = 'N', value_parser = clap::value_parser!(u32).range(2..))]
    pub n: Option<u32>,
    #[arg(long, allow_hyphen_values = true, requires = "b", conflicts_with_all = ["p", "lambda"])]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "a")]
    pub b: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long = "Lambda", alias = "lambda", id = "lambda")]
    pub lambda: Option<f64>,
    /// Interpolation parameter in (theta_min, 1].
    #[arg(long)]
    pub theta: Option<f64>,
}

/// Canonical form of a full point.
#[derive(Debug, Clone, Copy)]
pub struct Point {
    pub n: u32,
    pub p: f64,
    pub lambda: f64,
    pub theta: f64,
    pub euclidean: Option<ParamPoint>,
}

impl PointArgs {
    /// Resolves to a full point, or `None` when no point flags were given.
    pub fn resolve(&self) -> Result<Option<Point>, CliError> {
        let theta = self.theta.unwrap_or(1.0);
        match (self.a, self.b, self.p, self.lambda) {
            (None, None, None, None) => {
                if self.n.is_some() || self.theta.is_some() {
                    return Err(CliError::Usage("a point needs (--a, --b) or (--p, --Lambda)".into()));
                }
                Ok(None)
            }
            (Some(a), Some(b), None, None) => {
                let n = self.require_n()?;
                let pt = ParamPoint::new(n, a, b)?;
                let cyl = to_cylinder(&pt)?;
                Ok(Some(Point { n, p: cyl.p, lambda: cyl.lambda, theta, euclidean: Some(pt) }))
            }
            (None, None, Some(p), Some(lambda)) => {
                let n = self.require_n()?;
                from_cylinder(n, p, lambda)?;
                Ok(Some(Point { n, p, lambda, theta, euclidean: None }))
            }
            _ => Err(CliError::Usage("give both --p and --Lambda".into())),
        }
    }

    pub fn require(&self) -> Result<Point, CliError> {
        self.resolve()?
            .ok_or_else(|| CliError::Usage("missing parameter point: (--N, --a, --b) or (--N, --p, --Lambda)".into()))
    }

    fn require_n(&self) -> Result<u32, CliError> {
        self.n.ok_or_else(|| CliError::Usage("missing --N".into()))
    }
}

#[derive(Debug, Clone, Args)]
pub struct ConstantsArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Lieb-Thirring exponent (> 1/2).
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RegionArgs {
    #[arg(long = "N", short = 'N', default_value_t = 3, value_parser = clap::value_parser!(u32).range(2..))]
    pub n: u32,
    #[arg(long, default_value_t = -4.0, allow_hyphen_values = true)]
    pub a_min: f64,
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub a_max: f64,
    #[arg(long, default_value_t = 91)]
    pub a_points: usize,
    #[arg(long, default_value_t = -3.0, allow_hyphen_values = true)]
    pub b_min: f64,
    #[arg(long, default_value_t = 1.5, allow_hyphen_values = true)]
    pub b_max: f64,
    #[arg(long, default_value_t = 91)]
    pub b_points: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(subcommand)]
    pub check: Check,
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

/// Line grid override; the default depends on the check.
#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Half-width of the line grid.
    #[arg(long)]
    pub s_max: Option<f64>,
    /// Number of interior grid points.
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// Highest zonal degree.
    #[arg(long, default_value_t = 8)]
    pub l_max: usize,
    #[arg(long, default_value_t = 20_000)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol_grad: f64,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Check {
    /// Lieb-Thirring equality case and random-well bound.
    Lt {
        #[arg(long, default_value_t = 2.5)]
        gamma: f64,
        /// Random wells tested against the bound.
        #[arg(long, default_value_t = 200)]
        wells: usize,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Generalised Poincare inequality on random zonal fields.
    Poincare {
        #[arg(long = "N", short = 'N', default_value_t = 3, value_parser = clap::value_parser!(u32).range(2..))]
        n: u32,
        /// Exponent in [1, q_max]; defaults to a sweep.
        #[arg(long)]
        q: Option<f64>,
        #[arg(long, default_value_t = 1000)]
        fields: usize,
    },
    /// Slacks of the symmetry proof chain.
    Chain {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, default_value_t = 500)]
        fields: usize,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Identity linking Lambda, A and B.
    Lambdacond {
        #[arg(long)]
        p: f64,
        #[arg(long = "Lambda", alias = "lambda")]
        lambda: f64,
    },
    /// Felli-Schneider threshold from the radial second variation.
    Fs {
        #[arg(long)]
        p: f64,
        #[arg(long = "N", short = 'N', value_parser = clap::value_parser!(u32).range(2..))]
        n: u32,
    },
    /// Full 2-D minimisation of the quotient.
    Minimize {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Bracketing of the theta < 1 constant.
    Sandwich {
        #[arg(long = "N", short = 'N', default_value_t = 3, value_parser = clap::value_parser!(u32).range(2..))]
        n: u32,
        #[arg(long, default_value_t = 3.0)]
        p: f64,
        #[arg(long)]
        theta: f64,
        /// Defaults to 90 % of the admissible bound.
        #[arg(long = "Lambda", alias = "lambda")]
        lambda: Option<f64>,
        #[command(flatten)]
        solver: SolverArgs,
    },
}
