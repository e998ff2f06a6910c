//! Command-line front end: instance files, solving, selection, reduction
//! generation and verification, and benchmarks.

pub mod bench;
pub mod budget;
pub mod commands;
pub mod formats;

use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kclust::hypergraph::CandidateMode;
use kclust::selection::SelectCaps;
use kclust::solver::{BipartitionConfig, BruteForceConfig, SolveCaps};
use kclust::{Error, IterationPolicy, SelectConfig, SolveConfig, Tolerance, VerifyConfig};

/// Exit code for a "yes" decision or a clean run.
pub const EXIT_YES: i32 = 0;
/// Exit code for a "no" decision or a disagreement.
pub const EXIT_NO: i32 = 1;
/// Exit code for any error.
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "kclust", version, about = "Exact clustering and cluster selection under Minkowski-type distances")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide a clustering instance.
    Solve(SolveArgs),
    /// Decide a cluster selection instance.
    Select(SelectArgs),
    /// Write the instance produced by a reduction.
    Generate(GenerateArgs),
    /// Check that a reduction preserves yes and no answers.
    Verify(VerifyArgs),
    /// Time the solvers and print CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// The color-coding solver and the specialised selection solvers.
    #[default]
    Paper,
    /// The brute-force oracles.
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Candidates {
    Auto,
    Paper,
    Exhaustive,
}

/// `auto`, `exhaustive` or `iters=<n>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Policy(pub IterationPolicy);

impl FromStr for Policy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "auto" => Ok(Policy(IterationPolicy::Auto)),
            "exhaustive" => Ok(Policy(IterationPolicy::Exhaustive)),
            _ => s
                .strip_prefix("iters=")
                .and_then(|n| n.parse().ok())
                .map(|n| Policy(IterationPolicy::Iterations(n)))
                .ok_or_else(|| format!("expected auto, exhaustive or iters=<n>, got {s:?}")),
        }
    }
}

/// Flags shared by the solving commands.
#[derive(Clone, Debug, Args)]
pub struct RunFlags {
    /// Seed for random colorings and sampling.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// auto, exhaustive or iters=<n>.
    #[arg(long, default_value = "auto")]
    pub policy: Policy,
    #[arg(long, value_enum, default_value_t = Mode::Paper)]
    pub mode: Mode,
    /// Candidate coordinate sets for 0 < p <= 1 selection.
    #[arg(long, value_enum, default_value_t = Candidates::Auto)]
    pub candidates: Candidates,
    /// Tolerance for comparisons involving irrational costs.
    #[arg(long, default_value = "1e-12")]
    pub tol: String,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long = "cap-iterations")]
    pub cap_iterations: Option<u64>,
    #[arg(long = "cap-colorings")]
    pub cap_colorings: Option<u128>,
    #[arg(long = "cap-colors")]
    pub cap_colors: Option<u64>,
    #[arg(long = "cap-partitions")]
    pub cap_partitions: Option<u128>,
    #[arg(long = "cap-tuples")]
    pub cap_tuples: Option<u128>,
    #[arg(long = "cap-search-nodes")]
    pub cap_search_nodes: Option<u128>,
    #[arg(long = "cap-pattern-candidates")]
    pub cap_pattern_candidates: Option<u128>,
    #[arg(long = "cap-oracle-nodes")]
    pub cap_oracle_nodes: Option<u128>,
    #[arg(long = "cap-initial-clusters")]
    pub cap_initial_clusters: Option<usize>,
    #[arg(long = "cap-clique-vertices")]
    pub cap_clique_vertices: Option<usize>,
}

impl Default for RunFlags {
    fn default() -> Self {
        Self {
            seed: 0,
            policy: Policy(IterationPolicy::Auto),
            mode: Mode::Paper,
            candidates: Candidates::Auto,
            tol: "1e-12".into(),
            jobs: 1,
            cap_iterations: None,
            cap_colorings: None,
            cap_colors: None,
            cap_partitions: None,
            cap_tuples: None,
            cap_search_nodes: None,
            cap_pattern_candidates: None,
            cap_oracle_nodes: None,
            cap_initial_clusters: None,
            cap_clique_vertices: None,
        }
    }
}

impl RunFlags {
    pub fn tolerance(&self) -> kclust::Result<Tolerance> {
        Tolerance::parse(&self.tol)
    }

    pub fn select_config(&self) -> kclust::Result<SelectConfig> {
        let mut caps = SelectCaps::default();
        if let Some(n) = self.cap_tuples {
            caps.tuples = n;
        }
        if let Some(n) = self.cap_search_nodes {
            caps.search_nodes = n;
        }
        if let Some(n) = self.cap_pattern_candidates {
            caps.patterns.candidates = n;
        }
        let mode = match self.candidates {
            Candidates::Auto => None,
            Candidates::Paper => Some(CandidateMode::Paper),
            Candidates::Exhaustive => Some(CandidateMode::Exhaustive),
        };
        Ok(SelectConfig { tol: self.tolerance()?, caps, mode })
    }

    pub fn solve_config(&self) -> kclust::Result<SolveConfig> {
        let mut caps = SolveCaps::default();
        if let Some(n) = self.cap_iterations {
            caps.max_iterations = n;
        }
        if let Some(n) = self.cap_colorings {
            caps.colorings = n;
        }
        if let Some(n) = self.cap_colors {
            caps.colors = n;
        }
        if let Some(n) = self.cap_partitions {
            caps.partitions = n;
        }
        if self.jobs == 0 {
            return Err(Error::InvalidInstance("--jobs must be positive".into()));
        }
        Ok(SolveConfig {
            seed: self.seed,
            policy: self.policy.0,
            caps,
            tol: self.tolerance()?,
            select: self.select_config()?,
            jobs: self.jobs,
            ..SolveConfig::default()
        })
    }

    pub fn bruteforce_config(&self) -> kclust::Result<BruteForceConfig> {
        let mut cfg = BruteForceConfig { tol: self.tolerance()?, ..BruteForceConfig::default() };
        if let Some(n) = self.cap_oracle_nodes {
            cfg.nodes = n;
        }
        if let Some(n) = self.cap_initial_clusters {
            cfg.initial_clusters = n;
        }
        Ok(cfg)
    }

    pub fn verify_config(&self, figure_mode: bool) -> kclust::Result<VerifyConfig> {
        let mut bipartition = BipartitionConfig { tol: self.tolerance()?, ..BipartitionConfig::default() };
        if let Some(n) = self.cap_oracle_nodes {
            bipartition.nodes = n;
        }
        let mut cfg = VerifyConfig {
            mode: match self.mode {
                Mode::Paper => kclust::generators::SolverMode::Paper,
                Mode::Oracle => kclust::generators::SolverMode::Oracle,
            },
            select: self.select_config()?,
            bruteforce: self.bruteforce_config()?,
            solve: SolveConfig { jobs: 1, ..self.solve_config()? },
            bipartition,
            figure_mode,
            ..VerifyConfig::default()
        };
        if let Some(n) = self.cap_clique_vertices {
            cfg.clique_cap = n;
        }
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Clustering instance file.
    pub input: PathBuf,
    #[command(flatten)]
    pub flags: RunFlags,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    /// Selection instance file.
    pub input: PathBuf,
    #[command(flatten)]
    pub flags: RunFlags,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// l0-clique, l0-mcc, l1-mcc, linf-clique, linf-mcc, lp-mcc or 3sat-hioct-linf2.
    pub reduction: String,
    /// Graph, HIOCT or 3-CNF file.
    pub graph: PathBuf,
    /// Clique size.
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    /// Exponent for lp-mcc.
    #[arg(long, default_value = "2")]
    pub p: String,
    /// Keep isolated vertices and skip the extra isolated edges (3sat-hioct-linf2).
    #[arg(long)]
    pub figure: bool,
    /// Output path; stdout when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// l0-clique, l0-mcc, l1-mcc, linf-clique, linf-mcc, lp-mcc or 3sat-hioct-linf2.
    pub reduction: String,
    /// Graph or 3-CNF file to check.
    pub graph: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, default_value = "2")]
    pub p: String,
    /// Every graph on n vertices up to isomorphism (every coloring for the
    /// colored reductions), or every formula over n variables.
    #[arg(long)]
    pub sweep: Option<usize>,
    /// Number of seeded random graphs or formulas.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Largest number of vertices (or variables) of a random sample.
    #[arg(long, default_value_t = 7)]
    pub vertices: usize,
    /// Largest number of clauses in formula sweeps and samples.
    #[arg(long, default_value_t = 2)]
    pub clauses: usize,
    #[arg(long)]
    pub figure: bool,
    #[command(flatten)]
    pub flags: RunFlags,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// select-lp01, select-l1, select-l2, select-linf, select-l0, solve or empty.
    pub suite: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output path; stdout when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Failure of a command.
#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => f.write_str(e),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Runs a parsed command line and returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Solve(a) => commands::solve(a, out),
        Command::Select(a) => commands::select_cmd(a, out),
        Command::Generate(a) => commands::generate(a, out),
        Command::Verify(a) => commands::verify(a, out),
        Command::Bench(a) => bench::run(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

/// Parses `args` (including the program name) and runs them.
pub fn run_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, out, err),
        Err(e) if e.use_stderr() => {
            let _ = write!(err, "{e}");
            EXIT_ERROR
        }
        Err(e) => {
            let _ = write!(out, "{e}");
            EXIT_YES
        }
    }
}
