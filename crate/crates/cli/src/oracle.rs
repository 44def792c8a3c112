use std::path::PathBuf;
use std::time::Instant;

use acyclab_core::oracle::{
    decide_colorable, make_edge_critical_with, max_transitive_subtournament, solve_nae, ColoringRule, OracleError,
};
use acyclab_core::{Instance, InstanceFile, NaeInstance, OracleBudget};
use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::files::{emit_instance, emit_json, read_instance, read_json};
use crate::{Exit, OutOfBudget};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Task {
    Acyclic,
    Proper,
    Nae,
    Maxtrans,
    Critical,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(long, value_enum)]
    task: Task,
    /// Number of colors (acyclic, proper, critical).
    #[arg(long)]
    r: Option<usize>,
    /// Instance file; JSON for `nae`.
    #[arg(long = "in")]
    input: PathBuf,
    /// JSON report; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Coloring rule for `critical`.
    #[arg(long, value_enum, default_value = "acyclic")]
    rule: Rule,
    /// Where `critical` writes the edge-critical subinstance.
    #[arg(long)]
    instance_out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Rule {
    Acyclic,
    Proper,
}

#[derive(Serialize)]
struct Report {
    task: String,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Value>,
    nodes: u64,
    seconds: f64,
    #[serde(flatten)]
    extra: serde_json::Map<String, Value>,
}

fn need_r(args: &OracleArgs) -> anyhow::Result<usize> {
    args.r.ok_or_else(|| anyhow::anyhow!("--r is required for this task"))
}

fn exit_for(verdict: &str) -> Exit {
    match verdict {
        "yes" | "critical" => Exit::Success,
        "no" | "colorable" => Exit::Negative,
        _ => Exit::Inconclusive,
    }
}

pub fn run(args: OracleArgs, budget: &OracleBudget) -> anyhow::Result<Exit> {
    let task = args.task.to_possible_value().expect("no skipped variants").get_name().to_string();
    let start = Instant::now();
    let mut extra = serde_json::Map::new();
    let report = match args.task {
        Task::Acyclic | Task::Proper => {
            let r = need_r(&args)?;
            let inst = read_instance(&args.input)?.instance;
            let rule = if args.task == Task::Acyclic { ColoringRule::Acyclic } else { ColoringRule::Proper };
            let out = decide_colorable(&inst, rule, r, budget)?;
            extra.insert("r".into(), r.into());
            Report {
                task,
                verdict: out.verdict.label(),
                witness: out.verdict.witness().map(serde_json::to_value).transpose()?,
                nodes: out.nodes,
                seconds: out.seconds,
                extra,
            }
        }
        Task::Nae => {
            let inst: NaeInstance = read_json(&args.input)?;
            let out = solve_nae(&inst, budget);
            Report {
                task,
                verdict: out.verdict.label(),
                witness: out.verdict.witness().map(|w| json!(w)),
                nodes: out.nodes,
                seconds: out.seconds,
                extra,
            }
        }
        Task::Maxtrans => {
            let Instance::Tournament(t) = read_instance(&args.input)?.instance else {
                anyhow::bail!("maxtrans needs a tournament");
            };
            let out = max_transitive_subtournament(&t, budget);
            extra.insert("size".into(), out.vertices.len().into());
            extra.insert("exact".into(), out.exact.into());
            Report {
                task,
                verdict: if out.exact { "yes" } else { "inconclusive" },
                witness: Some(json!(out.vertices)),
                nodes: out.nodes,
                seconds: out.seconds,
                extra,
            }
        }
        Task::Critical => {
            let r = need_r(&args)?;
            let inst = read_instance(&args.input)?.instance;
            let rule = match args.rule {
                Rule::Acyclic => ColoringRule::Acyclic,
                Rule::Proper => ColoringRule::Proper,
            };
            extra.insert("r".into(), r.into());
            match make_edge_critical_with(&inst, rule, r, budget) {
                Ok(out) => {
                    extra.insert("vertices".into(), out.instance.n().into());
                    extra.insert("edges".into(), out.instance.m().into());
                    extra.insert("removed".into(), json!(out.removed));
                    let witness = out.critical_edge.as_ref().map(|(e, c)| json!({"critical_edge": e, "coloring": c}));
                    if let Some(path) = &args.instance_out {
                        let mut file = InstanceFile::new(out.instance.clone()).with_meta("generator", "critical");
                        if let Some(((u, v), _)) = &out.critical_edge {
                            file = file.with_meta("critical-edge", format!("{u},{v}"));
                        }
                        emit_instance(Some(path), &file)?;
                    }
                    Report {
                        task,
                        verdict: "critical",
                        witness,
                        nodes: out.nodes,
                        seconds: start.elapsed().as_secs_f64(),
                        extra,
                    }
                }
                Err(OracleError::AlreadyColorable { .. }) => Report {
                    task,
                    verdict: "colorable",
                    witness: None,
                    nodes: 0,
                    seconds: start.elapsed().as_secs_f64(),
                    extra,
                },
                Err(e @ OracleError::CriticalInconclusive { .. }) => return Err(OutOfBudget(e.to_string()).into()),
                Err(e) => return Err(e.into()),
            }
        }
    };
    emit_json(args.out.as_deref(), &report)?;
    eprintln!("{}: {} after {} nodes", report.task, report.verdict, report.nodes);
    Ok(exit_for(report.verdict))
}
