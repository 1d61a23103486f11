//! `privrep`: frontier sweeps, boosting simulations, gadget certification
//! and lower-bound experiments.
//!
//! Exit status: 0 success, 1 a checked assertion failed, 2 invalid input,
//! 3 I/O error.

mod commands;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use privrep_core::{Error, Manifest};

use settings::{put, Settings};

#[derive(Parser)]
#[command(
    name = "privrep",
    version,
    about = "Private repetition and hyperparameter tuning experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lower and upper privacy-overhead curves over a grid of call budgets.
    Frontier(FrontierArgs),
    /// Failure rate and call counts of a booster on coin mechanisms.
    Simulate(SimulateArgs),
    /// Exhaustive differential-privacy check of a gadget at small dimension.
    GadgetVerify(GadgetArgs),
    /// Runs a booster against a lower-bound gadget and checks the proof steps.
    LowerBound(LowerBoundArgs),
}

#[derive(Args)]
struct Common {
    /// key=value file; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed; drawn from system entropy and recorded when omitted.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (0 = all cores). Does not affect results.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output directory.
    #[arg(long, default_value = "privrep-out")]
    out: PathBuf,
}

#[derive(Args)]
struct FrontierArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    arms: Option<u32>,
    /// Base mechanism epsilon for the upper curve.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Explicit comma-separated budget grid; overrides --t-min/--t-max/--points.
    #[arg(long)]
    t: Option<String>,
    #[arg(long)]
    t_min: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// Use the same-input lower bound instead of the arbitrary-input one.
    #[arg(long)]
    same_input: Option<bool>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: Common,
    /// naive, lt, hybrid or metaselect.
    #[arg(long)]
    alg: Option<String>,
    /// Comma-separated failure targets.
    #[arg(long)]
    gamma: Option<String>,
    /// Comma-separated round counts for hybrid and metaselect.
    #[arg(long)]
    c: Option<String>,
    /// Comma-separated repetition counts for naive.
    #[arg(long)]
    t: Option<String>,
    /// Comma-separated coin success probabilities, one per arm.
    #[arg(long)]
    p: Option<String>,
    /// Number of arms; a single --p value is replicated.
    #[arg(long)]
    arms: Option<usize>,
    #[arg(long)]
    trials: Option<u64>,
}

#[derive(Args)]
struct GadgetArgs {
    #[command(flatten)]
    common: Common,
    /// ball, two_point, hyper_ball, rr or coin.
    #[arg(long)]
    gadget: Option<String>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Ball radius (Delta).
    #[arg(long, visible_alias = "delta")]
    radius: Option<usize>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    arms: Option<usize>,
    /// Coin success probability.
    #[arg(long)]
    p: Option<f64>,
}

#[derive(Args)]
struct LowerBoundArgs {
    #[command(flatten)]
    common: Common,
    /// two_point, ball or hyper_ball.
    #[arg(long)]
    variant: Option<String>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Call budget T the gadget is built against.
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    arms: Option<usize>,
    /// naive, lt, hybrid or metaselect.
    #[arg(long)]
    alg: Option<String>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    c: Option<u32>,
    /// Repetitions for naive (default T).
    #[arg(long)]
    reps: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    /// Seed for the hidden center and good arm (default: the master seed).
    #[arg(long)]
    gadget_seed: Option<u64>,
    /// Draw a fresh hidden center every trial.
    #[arg(long)]
    resample: Option<bool>,
}

/// Why a command did not succeed.
pub enum Failure {
    Assertion(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn common_flags(c: &Common) -> Manifest {
    let mut m = Manifest::new();
    put(&mut m, "seed", &c.seed);
    m
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Frontier(a) => {
            let mut m = common_flags(&a.common);
            put(&mut m, "gamma", &a.gamma);
            put(&mut m, "arms", &a.arms);
            put(&mut m, "epsilon", &a.epsilon);
            put(&mut m, "t", &a.t);
            put(&mut m, "t_min", &a.t_min);
            put(&mut m, "t_max", &a.t_max);
            put(&mut m, "points", &a.points);
            put(&mut m, "same_input", &a.same_input);
            let s = Settings::load("frontier", a.common.config.as_deref(), m)?;
            commands::frontier(s, &a.common.out)
        }
        Command::Simulate(a) => {
            let mut m = common_flags(&a.common);
            put(&mut m, "alg", &a.alg);
            put(&mut m, "gamma", &a.gamma);
            put(&mut m, "c", &a.c);
            put(&mut m, "t", &a.t);
            put(&mut m, "p", &a.p);
            put(&mut m, "arms", &a.arms);
            put(&mut m, "trials", &a.trials);
            let s = Settings::load("simulate", a.common.config.as_deref(), m)?;
            commands::simulate(s, &a.common.out, a.common.jobs)
        }
        Command::GadgetVerify(a) => {
            let mut m = common_flags(&a.common);
            put(&mut m, "gadget", &a.gadget);
            put(&mut m, "epsilon", &a.epsilon);
            put(&mut m, "radius", &a.radius);
            put(&mut m, "dim", &a.dim);
            put(&mut m, "arms", &a.arms);
            put(&mut m, "p", &a.p);
            let s = Settings::load("gadget-verify", a.common.config.as_deref(), m)?;
            commands::gadget_verify(s, &a.common.out)
        }
        Command::LowerBound(a) => {
            let mut m = common_flags(&a.common);
            put(&mut m, "variant", &a.variant);
            put(&mut m, "epsilon", &a.epsilon);
            put(&mut m, "t", &a.t);
            put(&mut m, "arms", &a.arms);
            put(&mut m, "alg", &a.alg);
            put(&mut m, "gamma", &a.gamma);
            put(&mut m, "c", &a.c);
            put(&mut m, "reps", &a.reps);
            put(&mut m, "trials", &a.trials);
            put(&mut m, "gadget_seed", &a.gadget_seed);
            put(&mut m, "resample", &a.resample);
            let s = Settings::load("lower-bound", a.common.config.as_deref(), m)?;
            commands::lower_bound(s, &a.common.out, a.common.jobs)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Assertion(msg)) => {
            eprintln!("FAIL: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Core(e @ Error::Io { .. })) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
