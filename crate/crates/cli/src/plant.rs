use std::path::PathBuf;

use acyclab_core::tournaments::{
    generate_planted, recover as run_recovery, PhaseTimes, PlantedSpec, PlantedTruth, RecoveryConfig, TailMode,
    TournamentError,
};
use acyclab_core::{Instance, InstanceFile};
use clap::{Args, ValueEnum};

use crate::files::{emit_instance, emit_json, parse_list, read_instance, read_json, sidecar};
use crate::{Exit, OutOfBudget};

#[derive(Args, Debug)]
pub struct PlantArgs {
    /// Class sizes, largest first, e.g. `300,300,300`.
    #[arg(long)]
    sizes: String,
    #[arg(long)]
    seed: u64,
    /// Tournament file; the hidden classes go to `<out>.truth.json`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Tail {
    Exact,
    Approx,
}

impl From<Tail> for TailMode {
    fn from(t: Tail) -> TailMode {
        match t {
            Tail::Exact => TailMode::Exact,
            Tail::Approx => TailMode::Approximate,
        }
    }
}

/// Recovery knobs shared with `sweep`.
#[derive(Args, Debug, Clone)]
pub struct RecoveryOptions {
    /// Smallest class phase 2 accepts; `ceil(24 ln n')` by default.
    #[arg(long)]
    pub k0: Option<usize>,
    /// Bottom-set size in phase 2; `min(3, ceil(c ln n'))` by default.
    #[arg(long)]
    pub u_size: Option<usize>,
    /// Most bottom sets phase 2 enumerates.
    #[arg(long, default_value_t = 10_000_000)]
    pub cap: u64,
    #[arg(long, value_enum, default_value = "approx")]
    pub tail: Tail,
    /// Largest residual the exact tail accepts.
    #[arg(long, default_value_t = 25)]
    pub exact_tail_limit: usize,
    #[arg(long)]
    pub max_rounds: Option<usize>,
}

impl RecoveryOptions {
    pub fn config(&self, c: f64) -> RecoveryConfig {
        RecoveryConfig {
            c,
            k0: self.k0,
            u_size: self.u_size,
            cap: self.cap,
            tail: self.tail.into(),
            exact_tail_limit: self.exact_tail_limit,
            max_rounds: self.max_rounds,
        }
    }
}

#[derive(Args, Debug)]
pub struct RecoverArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Phase-1 concentration constant.
    #[arg(long, default_value_t = 0.5)]
    c: f64,
    #[command(flatten)]
    options: RecoveryOptions,
    /// Planted truth (as written by `plant`); adds `exact_match` to the report.
    #[arg(long)]
    truth: Option<PathBuf>,
    /// JSON report; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Zero the wall-clock fields so reruns are byte-identical.
    #[arg(long)]
    no_timings: bool,
}

pub fn tournament_error(e: TournamentError) -> anyhow::Error {
    match e {
        TournamentError::TailInconclusive { .. } => OutOfBudget(e.to_string()).into(),
        other => other.into(),
    }
}

pub fn plant(args: PlantArgs) -> anyhow::Result<Exit> {
    let sizes: Vec<usize> = parse_list(&args.sizes)?;
    let spec = PlantedSpec::new(sizes, args.seed)?;
    let (t, truth) = generate_planted(&spec);
    let sizes: Vec<String> = spec.sizes().iter().map(usize::to_string).collect();
    let file = InstanceFile::new(t)
        .with_meta("generator", "planted")
        .with_meta("sizes", sizes.join(","))
        .with_meta("seed", args.seed);
    emit_instance(Some(&args.out), &file)?;
    let truth_path = sidecar(&args.out, "truth.json");
    emit_json(Some(&truth_path), &truth)?;
    eprintln!("planted tournament on {} vertices -> {}, truth -> {}", spec.n(), args.out.display(), truth_path.display());
    Ok(Exit::Success)
}

pub fn recover(args: RecoverArgs) -> anyhow::Result<Exit> {
    let Instance::Tournament(t) = read_instance(&args.input)?.instance else {
        anyhow::bail!("{} is not a tournament", args.input.display());
    };
    let truth: Option<PlantedTruth> = args.truth.as_deref().map(read_json).transpose()?;
    if let Some(truth) = &truth {
        let covered: usize = truth.classes.iter().map(Vec::len).sum();
        anyhow::ensure!(covered == t.n(), "truth covers {covered} vertices, tournament has {}", t.n());
    }
    let cfg = args.options.config(args.c);
    let mut report = run_recovery(&t, &cfg).map_err(tournament_error)?;
    if let Some(truth) = &truth {
        report.compare(truth);
    }
    let times = report.times;
    if args.no_timings {
        report.times = PhaseTimes::default();
    }
    emit_json(args.out.as_deref(), &report)?;
    eprintln!(
        "{} classes ({} from phase 1), exact match {}, phases {:.1}/{:.1}/{:.1} ms",
        report.classes.len(),
        report.phase1_classes,
        report.exact_match.map_or("unknown".into(), |m| m.to_string()),
        times.phase1_ms,
        times.phase2_ms,
        times.phase3_ms
    );
    Ok(Exit::Success)
}
