//! Command-line arguments and their validation into a [`RunConfig`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use semimarkov_core::classical::SemiMarkovSpec;
use semimarkov_core::quantum::{MapVariant, ModelSpec};
use semimarkov_core::renewal::WaitingTime;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Dist {
    Exp,
    Erlang2,
    Hypoexp,
    Mix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Dephasing,
    Projection,
    Dissipative,
}

impl From<Model> for MapVariant {
    fn from(m: Model) -> Self {
        match m {
            Model::Dephasing => MapVariant::Dephasing,
            Model::Projection => MapVariant::Projection,
            Model::Dissipative => MapVariant::Dissipative,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "semimarkov", version, about = "Semi-Markov qubit dynamics and non-Markovianity measures")]
pub struct Cli {
    #[command(flatten)]
    pub options: Options,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// q (or g) and one-point trajectories w(t) for several initial values.
    Trajectories {
        /// Number of random initial values w(0), ignored when --w0 is given.
        #[arg(long, default_value_t = 5)]
        count: usize,
        /// Explicit initial values w(0); repeat or separate with commas.
        #[arg(long, value_delimiter = ',')]
        w0: Vec<f64>,
    },
    /// q, γ and δ on a grid, with gap rows where q vanishes.
    Rates,
    /// Trace-distance and divisibility measures and the divisibility class.
    Measures {
        /// Also maximize over pure-state pairs numerically.
        #[arg(long)]
        search: bool,
        /// Angle grid density for --search.
        #[arg(long, default_value_t = 8)]
        search_grid: usize,
    },
    /// Monte Carlo checks of the parity function and of the Markov property.
    McVerify {
        /// Agreement threshold in standard errors.
        #[arg(long, default_value_t = 3.0)]
        sigma: f64,
        /// z-score above which a Markov violation is reported as detected.
        #[arg(long, default_value_t = 5.0)]
        detect_sigma: f64,
        /// Number of random times for the parity check.
        #[arg(long, default_value_t = 10)]
        parity_points: usize,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Waiting-time family.
    #[arg(long, value_enum, default_value = "exp", global = true)]
    pub dist: Dist,
    /// First rate (the only rate for exp and erlang2).
    #[arg(long, global = true)]
    pub lambda1: Option<f64>,
    /// Second rate (hypoexp, mix).
    #[arg(long, global = true)]
    pub lambda2: Option<f64>,
    /// Weight of the first exponential in a mixture.
    #[arg(long, global = true)]
    pub mu: Option<f64>,
    /// Rate sum s for hypoexp, used with --p-over-s2.
    #[arg(long, global = true)]
    pub sum: Option<f64>,
    /// Ratio p/s² of rate product to squared rate sum for hypoexp.
    #[arg(long, global = true)]
    pub p_over_s2: Option<f64>,
    /// Jump probability of the classical process.
    #[arg(long, default_value_t = 1.0, global = true)]
    pub pi: f64,
    /// Jump map of the quantum model.
    #[arg(long, value_enum, default_value = "dephasing", global = true)]
    pub model: Model,
    /// Time horizon; each command has its own default.
    #[arg(long, global = true)]
    pub tmax: Option<f64>,
    /// Number of grid points (time grid, or classification grid for measures).
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    #[arg(long, default_value_t = 1, global = true)]
    pub seed: u64,
    /// Monte Carlo samples per estimate.
    #[arg(long, default_value_t = 100_000, global = true)]
    pub samples: u64,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Defaults to csv for tables and json for reports.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
}

/// Validated parameters shared by all commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub dist: Dist,
    pub waiting: WaitingTime,
    pub pi: f64,
    pub model: MapVariant,
    pub tmax: Option<f64>,
    pub grid: Option<usize>,
    pub seed: u64,
    pub samples: u64,
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Config(format!("--{name} must be positive, got {v}")))
    }
}

fn required(name: &str, v: Option<f64>, dist: &str) -> Result<f64, CliError> {
    v.ok_or_else(|| CliError::Config(format!("--dist {dist} needs --{name}")))
}

impl RunConfig {
    /// Builds the waiting-time law and checks every parameter.
    pub fn from_options(o: &Options) -> Result<Self, CliError> {
        let lambda1 = o.lambda1.unwrap_or(1.0);
        let waiting = match o.dist {
            Dist::Exp => WaitingTime::exponential(lambda1)?,
            Dist::Erlang2 => WaitingTime::erlang_two(lambda1)?,
            Dist::Hypoexp => match (o.sum, o.p_over_s2, o.lambda2) {
                (_, Some(r), None) => WaitingTime::hypoexponential_from_ratio(o.sum.unwrap_or(1.0), r)?,
                (None, None, Some(l2)) => WaitingTime::hypoexponential(lambda1, l2)?,
                (None, None, None) => {
                    return Err(CliError::Config("--dist hypoexp needs --lambda2 or --p-over-s2".into()))
                }
                _ => {
                    return Err(CliError::Config(
                        "--dist hypoexp takes either --lambda1/--lambda2 or --sum/--p-over-s2".into(),
                    ))
                }
            },
            Dist::Mix => WaitingTime::mixture(
                lambda1,
                required("lambda2", o.lambda2, "mix")?,
                required("mu", o.mu, "mix")?,
            )?,
        };
        if !(0.0..=1.0).contains(&o.pi) {
            return Err(CliError::Config(format!("--pi must lie in [0, 1], got {}", o.pi)));
        }
        let tmax = o.tmax.map(|t| positive("tmax", t)).transpose()?;
        if let Some(g) = o.grid {
            if g < 2 {
                return Err(CliError::Config(format!("--grid must be at least 2, got {g}")));
            }
        }
        if o.samples == 0 {
            return Err(CliError::Config("--samples must be positive".into()));
        }
        Ok(RunConfig {
            dist: o.dist,
            waiting,
            pi: o.pi,
            model: o.model.into(),
            tmax,
            grid: o.grid,
            seed: o.seed,
            samples: o.samples,
        })
    }

    pub fn classical(&self) -> Result<SemiMarkovSpec, CliError> {
        Ok(SemiMarkovSpec::new(self.pi, self.waiting)?)
    }

    pub fn quantum(&self) -> ModelSpec {
        ModelSpec::new(self.model, self.waiting)
    }

    pub fn dist_name(&self) -> &'static str {
        match self.dist {
            Dist::Exp => "exp",
            Dist::Erlang2 => "erlang2",
            Dist::Hypoexp => "hypoexp",
            Dist::Mix => "mix",
        }
    }
}
