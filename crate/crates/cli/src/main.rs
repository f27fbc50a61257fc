//! `roto`: batch entry points for the objective, its gradient, the Monte
//! Carlo oracles, snake drafts and season experiments.
//!
//! Results go to stdout as JSON (or a plain table with `--pretty`),
//! diagnostics to stderr. Exit codes: 0 success, 1 invalid input,
//! 2 runtime failure.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "roto", version, about = "Rotisserie win-probability toolkit")]
struct Cli {
    /// Print human-readable tables instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,

    /// Worker threads for parallel commands (defaults to all cores).
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the win-probability objective.
    #[command(subcommand)]
    Objective(ObjectiveCmd),
    /// Compare the analytic gradient with central differences.
    #[command(subcommand)]
    Gradient(GradientCmd),
    /// Monte Carlo ground truth for the analytic approximations.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Snake drafts between G-score and objective-driven agents.
    #[command(subcommand)]
    Draft(DraftCmd),
    /// Run a season experiment and store its report.
    Simulate(SimulateArgs),
    /// Reference tables.
    #[command(subcommand)]
    Table(TableCmd),
    /// Exact count of winning scenarios, (teams!)^categories / teams.
    ScenarioCount(ScenarioArgs),
    /// Player pools.
    #[command(subcommand)]
    Pool(PoolCmd),
}

#[derive(Debug, Subcommand)]
enum ObjectiveCmd {
    /// Evaluate one state and print every intermediate moment.
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// JSON state file (`mu`, optional `rho`, optional `sigma_c`); `-` reads stdin.
    #[arg(long, value_name = "PATH", conflicts_with_all = ["categories", "opponents"])]
    state: Option<String>,
    /// Categories of an all-zero state (used without --state).
    #[arg(long, default_value_t = 9)]
    categories: usize,
    /// Opponents of an all-zero state (used without --state).
    #[arg(long, default_value_t = 11)]
    opponents: usize,
}

#[derive(Debug, Subcommand)]
enum GradientCmd {
    /// Check one state file, or a batch of random states.
    Check(GradientArgs),
}

#[derive(Debug, Args)]
struct GradientArgs {
    /// JSON state file; when absent, random states are generated.
    #[arg(long, value_name = "PATH")]
    state: Option<String>,
    /// Number of random states.
    #[arg(long, default_value_t = 100)]
    random: usize,
    #[command(flatten)]
    random_league: RandomLeagueArgs,
    /// Largest |mu| of random states.
    #[arg(long, default_value_t = 2.0)]
    mu_max: f64,
    /// Maximum relative error.
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    /// Central-difference step.
    #[arg(long, default_value_t = 1e-4)]
    step: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Debug, Args, Clone)]
struct RandomLeagueArgs {
    #[arg(long, default_value_t = 9)]
    categories: usize,
    #[arg(long, default_value_t = 11)]
    opponents: usize,
    /// Largest |rho| off the diagonal of random correlation matrices.
    #[arg(long, default_value_t = 0.2)]
    rho_max: f64,
}

#[derive(Debug, Subcommand)]
enum OracleCmd {
    /// Analytic V against Monte Carlo win probability: the symmetric league
    /// plus a sweep of random configurations.
    Compare(CompareArgs),
    /// Generic-opponent variance, analytic and sampled.
    OpponentVariance(OpponentVarianceArgs),
    /// Moments of the square root of a Normal variable.
    SqrtMoments(SqrtArgs),
    /// Bivariate Normal CDF approximation error over a grid.
    BvnGrid(BvnArgs),
}

#[derive(Debug, Args)]
struct CompareArgs {
    /// Random configurations in the sweep.
    #[arg(long, default_value_t = 50)]
    configs: usize,
    /// Monte Carlo draws per configuration.
    #[arg(long, default_value_t = 200_000)]
    draws: u64,
    #[command(flatten)]
    random_league: RandomLeagueArgs,
    /// Largest |mu| of random states.
    #[arg(long, default_value_t = 1.0)]
    mu_max: f64,
    /// Largest per-configuration shift added to every matchup, varying the
    /// focal team's overall strength across the sweep.
    #[arg(long, default_value_t = 0.5)]
    focal_shift: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Debug, Args)]
struct OpponentVarianceArgs {
    #[command(flatten)]
    random_league: RandomLeagueArgs,
    /// Opponent spread, the same for every category.
    #[arg(long, default_value_t = 0.0)]
    sigma_c: f64,
    /// Sampled scenarios for the Monte Carlo estimate.
    #[arg(long, default_value_t = 200)]
    scenarios: u64,
    /// Draws per scenario; 0 skips the Monte Carlo estimate.
    #[arg(long, default_value_t = 0)]
    inner: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Debug, Args)]
struct SqrtArgs {
    #[arg(long, default_value_t = 100.0)]
    mu: f64,
    #[arg(long, default_value_t = 5.0)]
    sigma: f64,
    #[arg(long, default_value_t = 1_000_000)]
    draws: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Debug, Args)]
struct BvnArgs {
    /// Grid covers |x|, |y| up to this value.
    #[arg(long, default_value_t = 2.0)]
    max_abs: f64,
    /// Grid covers |rho| up to this value.
    #[arg(long, default_value_t = 0.2)]
    max_rho: f64,
    #[arg(long, default_value_t = 0.1)]
    step: f64,
}

#[derive(Debug, Subcommand)]
enum DraftCmd {
    /// Run one complete snake draft.
    Run(DraftArgs),
}

#[derive(Debug, Args, Clone)]
struct PoolArgs {
    /// Projection CSV; a synthetic pool is generated when absent.
    #[arg(long, value_name = "PATH")]
    projections: Option<String>,
    /// Size of the synthetic pool.
    #[arg(long, default_value_t = 260)]
    synthetic_size: usize,
    /// Share of poor free-throw bigs in the synthetic pool.
    #[arg(long, default_value_t = 0.14)]
    low_ft_share: f64,
}

#[derive(Debug, Args, Clone)]
struct LeagueArgs {
    #[arg(long, default_value_t = 12)]
    teams: usize,
    /// Players per roster.
    #[arg(long, default_value_t = 13)]
    roster: usize,
    /// Projection confidence in (0, 1].
    #[arg(long, default_value_t = 0.5)]
    chi: f64,
    /// Override a category's noise scale, as NAME=VALUE (repeatable).
    #[arg(long, value_name = "NAME=VALUE")]
    tau: Vec<String>,
}

#[derive(Debug, Args, Clone)]
struct HArgs {
    /// Candidates evaluated per pick.
    #[arg(long, default_value_t = 40)]
    width: usize,
    /// Gradient steps per candidate.
    #[arg(long, default_value_t = 200)]
    steps: usize,
    /// Scale of the future-pick reshaping budget.
    #[arg(long, default_value_t = 0.05)]
    budget_scale: f64,
}

#[derive(Debug, Args)]
struct DraftArgs {
    #[command(flatten)]
    pool: PoolArgs,
    #[command(flatten)]
    league: LeagueArgs,
    #[command(flatten)]
    h: HArgs,
    /// Seats drafted by the objective-driven agent (repeatable).
    #[arg(long = "h-seat", value_name = "SEAT")]
    h_seats: Vec<usize>,
    /// Seed of the synthetic pool.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LayoutArg {
    /// Every seat drafts by G-score.
    AllG,
    /// One objective-driven seat rotating through a G-score field.
    RotatingH,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    pool: PoolArgs,
    #[command(flatten)]
    league: LeagueArgs,
    #[command(flatten)]
    h: HArgs,
    #[arg(long, value_enum, default_value_t = LayoutArg::RotatingH)]
    layout: LayoutArg,
    /// Draft batches; each batch drafts once per seat.
    #[arg(long, default_value_t = 1)]
    batches: usize,
    #[arg(long, default_value_t = 10)]
    seasons_per_draft: usize,
    /// Standard-point threshold for punt detection.
    #[arg(long, default_value_t = 1.5)]
    punt_threshold: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Run store directory.
    #[arg(long, env = "ROTO_STORE", default_value = "runs")]
    store: String,
    /// Explicit run id (defaults to a hash of config and seed).
    #[arg(long)]
    run_id: Option<String>,
}

#[derive(Debug, Subcommand)]
enum TableCmd {
    /// Expected value and variance of the maximum of n standard Normals.
    MaxStats,
}

#[derive(Debug, Args)]
struct ScenarioArgs {
    #[arg(long)]
    teams: u32,
    #[arg(long)]
    categories: u32,
}

#[derive(Debug, Subcommand)]
enum PoolCmd {
    /// Write a synthetic nine-category projection file.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 260)]
    size: usize,
    #[arg(long, default_value_t = 0.14)]
    low_ft_share: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_name = "PATH")]
    out: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.workers {
        Some(0) => Err(commands::CliError::Validation(
            "--workers must be at least 1".into(),
        )),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| commands::dispatch(&cli)),
            Err(e) => Err(commands::CliError::Runtime(e.to_string())),
        },
        None => commands::dispatch(&cli),
    };
    match result {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
