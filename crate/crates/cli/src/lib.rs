//! Command-line front end. `dispatch` parses arguments, runs one subcommand
//! and returns the process exit code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | verified negative (oracle "no", failed check) |
//! | 2 | usage error, bad input |
//! | 3 | budget exhausted or inconclusive |
//!
//! Machine-readable results go to files or stdout; summaries go to stderr.

mod amplify;
mod files;
mod gadget;
mod oracle;
mod plant;
mod reduce;
mod sweep;
mod verify;

use std::ffi::OsString;
use std::fmt;
use std::time::Duration;

use acyclab_core::OracleBudget;
use clap::{Args, Parser, Subcommand};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    Negative = 1,
    Usage = 2,
    Inconclusive = 3,
}

/// An error that should exit with "inconclusive" rather than "usage".
#[derive(Debug)]
pub struct OutOfBudget(pub String);

impl fmt::Display for OutOfBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "budget exhausted: {}", self.0)
    }
}

impl std::error::Error for OutOfBudget {}

#[derive(Parser, Debug)]
#[command(name = "acyclab", version, about = "Acyclic coloring gadgets, reductions, oracles and planted recovery")]
struct Cli {
    #[command(flatten)]
    budget: BudgetArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct BudgetArgs {
    /// Oracle node limit per search.
    #[arg(long, global = true, value_name = "N")]
    budget_nodes: Option<u64>,
    /// Oracle wall-clock limit per search; overrides ACL_BUDGET_SECS.
    #[arg(long, global = true, value_name = "SECS")]
    budget_secs: Option<f64>,
}

impl BudgetArgs {
    fn resolve(self) -> anyhow::Result<OracleBudget> {
        let env = std::env::var("ACL_BUDGET_SECS").ok();
        let secs = match (self.budget_secs, env) {
            (Some(s), _) => Some(s),
            (None, Some(v)) => Some(
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| anyhow::anyhow!("ACL_BUDGET_SECS must be a number, got `{v}`"))?,
            ),
            (None, None) => None,
        };
        let mut budget = OracleBudget::default();
        if let Some(s) = secs {
            anyhow::ensure!(s.is_finite() && s > 0.0, "budget seconds must be positive, got {s}");
            budget.time_limit = Duration::from_secs_f64(s);
        }
        if let Some(n) = self.budget_nodes {
            anyhow::ensure!(n > 0, "budget nodes must be positive");
            budget.node_limit = n;
        }
        Ok(budget)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build and certify gadgets.
    Gadget(gadget::GadgetArgs),
    /// Run a reduction pipeline on a source instance.
    Reduce(reduce::ReduceArgs),
    /// Run an exact oracle and print a JSON verdict.
    Oracle(oracle::OracleArgs),
    /// Generate a planted acyclically colored tournament.
    Plant(plant::PlantArgs),
    /// Recover a planted partition from a tournament.
    Recover(plant::RecoverArgs),
    /// Run a parameter grid in parallel and write CSV plus a JSON summary.
    Sweep(sweep::SweepArgs),
    /// Blow a graph up into a digraph with random bipartite orientations.
    Amplify(amplify::AmplifyArgs),
    /// Exhaustive acyclic-pair search on random orientations of K_{n,n}.
    BipartiteCheck(amplify::BipartiteArgs),
    /// Check a certificate against an instance.
    Verify(verify::VerifyArgs),
}

/// Parses `argv` (program name first) and runs the command.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { Exit::Usage } else { Exit::Success };
            let _ = e.print();
            return code as i32;
        }
    };
    match run(cli) {
        Ok(code) => code as i32,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<OutOfBudget>().is_some() {
                Exit::Inconclusive as i32
            } else {
                Exit::Usage as i32
            }
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<Exit> {
    let budget = cli.budget.resolve()?;
    match cli.command {
        Command::Gadget(a) => gadget::run(a, &budget),
        Command::Reduce(a) => reduce::run(a, &budget),
        Command::Oracle(a) => oracle::run(a, &budget),
        Command::Plant(a) => plant::plant(a),
        Command::Recover(a) => plant::recover(a),
        Command::Sweep(a) => sweep::run(a, &budget),
        Command::Amplify(a) => amplify::amplify(a, &budget),
        Command::BipartiteCheck(a) => amplify::bipartite(a),
        Command::Verify(a) => verify::run(a),
    }
}
