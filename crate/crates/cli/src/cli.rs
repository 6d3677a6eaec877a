//! Command-line arguments.

use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use crate::error::CliError;
use crate::input::{GuardConfig, Selector, WeightSource};
use crate::output::Format;

#[derive(Debug, Clone, Parser)]
#[command(
    name = "lrb",
    version,
    about = "Left-regular bands, their chamber walks, derangement numbers and descent algebras"
)]
pub struct Cli {
    /// Output format for tabular results.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Directory for artifacts.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for sampling and the self-test.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Build a semigroup, check the axioms and derive its support lattice.
    Build(SpecArgs),
    /// Eigenvalues and multiplicities of the chamber walk.
    Spectrum(SpectrumArgs),
    /// Primitive idempotents of the walk algebra.
    Idempotents(IdempotentArgs),
    /// Simulate one trajectory of the walk.
    Simulate(SimulateArgs),
    /// Stationary distribution of the walk.
    Stationary(StationaryArgs),
    /// Exact distance to stationarity against the coatom bound.
    Converge(ConvergeArgs),
    /// Generalized derangement numbers of a poset.
    Derangement(DerangementArgs),
    /// Descent algebra of the symmetric group.
    Descent(DescentArgs),
    /// Run the acceptance criteria.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SpecArgs {
    /// Construction spec or tabulated semigroup (JSON).
    #[arg(long)]
    pub spec: PathBuf,
}

#[derive(Debug, Clone, Args)]
#[group(skip)]
#[command(group = ArgGroup::new("weight_source").required(true).multiple(false))]
pub struct WeightArgs {
    /// Weight file mapping element keys to "p/q".
    #[arg(long, group = "weight_source")]
    pub weights: Option<PathBuf>,
    /// Uniform weights on `generators`, `all` or `length:K`.
    #[arg(long, group = "weight_source")]
    pub uniform_on: Option<Selector>,
    /// Seeded random rational weights on a selector.
    #[arg(long, group = "weight_source")]
    pub random_on: Option<Selector>,
    #[arg(long, default_value_t = 0, requires = "random_on")]
    pub weight_seed: u64,
}

impl WeightArgs {
    pub fn source(&self) -> WeightSource {
        match (&self.weights, self.uniform_on, self.random_on) {
            (Some(p), _, _) => WeightSource::File(p.clone()),
            (_, Some(sel), _) => WeightSource::Uniform(sel),
            (_, _, Some(on)) => WeightSource::Random {
                on,
                seed: self.weight_seed,
            },
            _ => unreachable!("clap requires one weight source"),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct WalkArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[command(flatten)]
    pub weights: WeightArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
    /// Verify diagonalizability by exact nullities.
    #[arg(long)]
    pub certify: bool,
}

#[derive(Debug, Clone, Args)]
pub struct IdempotentArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
    /// Sum idempotents with equal eigenvalue.
    #[arg(long)]
    pub grouped: bool,
    /// Compare with the signed-measure construction (free LRBs only).
    #[arg(long)]
    pub check_nu: bool,
    /// Work in the sub-LRB generated by the weighted elements.
    #[arg(long)]
    pub restrict: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
    /// Starting chamber key; the first chamber in key order by default.
    #[arg(long)]
    pub start: Option<String>,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StationaryMethod {
    Exact,
    Sample,
    Idempotent,
}

#[derive(Debug, Clone, Args)]
pub struct StationaryArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
    #[arg(long, value_enum, default_value_t = StationaryMethod::Exact)]
    pub method: StationaryMethod,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
    #[arg(long)]
    pub start: Option<String>,
    #[arg(long, default_value_t = 30)]
    pub mmax: usize,
    /// Also estimate Pr{T > m} from this many samples.
    #[arg(long, default_value_t = 0)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
#[group(skip)]
#[command(group = ArgGroup::new("poset_source").required(true).multiple(false))]
pub struct DerangementArgs {
    /// Poset file {"elements": [...], "covers": [[a,b]]}.
    #[arg(long, group = "poset_source")]
    pub poset: Option<PathBuf>,
    /// Boolean lattice of subsets of [n].
    #[arg(long, group = "poset_source")]
    pub boolean: Option<usize>,
    /// Subspaces of F_q^n, given as `n q`.
    #[arg(long, group = "poset_source", num_args = 2, value_names = ["N", "Q"])]
    pub subspace: Option<Vec<usize>>,
    /// Lattice of contractions of a graph (JSON edges or edge-list CSV).
    #[arg(long, group = "poset_source")]
    pub graph: Option<PathBuf>,
    /// Partition lattice of [n].
    #[arg(long, group = "poset_source")]
    pub partitions: Option<usize>,
    #[arg(long)]
    pub stanley: bool,
    #[arg(long)]
    pub mahajan: bool,
}

#[derive(Debug, Clone, Args)]
pub struct DescentArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub beta: bool,
    #[arg(long)]
    pub phi_check: bool,
    #[arg(long)]
    pub idempotents: bool,
    /// Invariant face weights whose walk is compared with its group measure.
    #[arg(long)]
    pub walk: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SelftestArgs {
    /// Run only these criteria.
    #[arg(long = "criterion", value_parser = clap::value_parser!(u8).range(1..=8))]
    pub criteria: Vec<u8>,
}

/// Everything a run needs: the parsed command line and the size caps.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub threads: usize,
    pub verbose: u8,
    pub guards: GuardConfig,
}

impl RunConfig {
    pub fn new(cli: Cli, guards: GuardConfig) -> Result<Self, CliError> {
        if cli.threads == 0 {
            return Err(CliError::parse("--threads must be at least 1"));
        }
        Ok(Self {
            command: cli.command,
            format: cli.format,
            out: cli.out,
            threads: cli.threads,
            verbose: cli.verbose,
            guards,
        })
    }
}
