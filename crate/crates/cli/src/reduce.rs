use std::path::PathBuf;

use acyclab_core::gadgets::{registry_get, GadgetKind};
use acyclab_core::oracle::ColoringRule;
use acyclab_core::reductions::{
    reduce_coloring_girth, reduce_coloring_to_acyclic_digraph, reduce_coloring_to_acyclic_graph,
    reduce_nae_to_acyclic2_digraph, reduce_nae_to_acyclic2_graph_with, split_binary_tree, Anchor, DegreeClaim,
    GadgetCopy, Pipeline, Provenance, ReductionError, ReductionOutput, StarGadget,
};
use acyclab_core::{DegreeStats, Instance, InstanceFile, NaeInstance, OracleBudget};
use clap::Args;
use serde::Serialize;

use crate::files::{emit_instance, emit_json, read_instance, read_json, sidecar};
use crate::gadget::gadget_error;
use crate::Exit;

#[derive(Args, Debug)]
pub struct ReduceArgs {
    #[arg(long)]
    pipeline: Pipeline,
    /// Colors of the source problem; NAE pipelines are fixed at 2.
    #[arg(long)]
    r: Option<usize>,
    /// Girth lower bound; NAE pipelines use the clause width.
    #[arg(long)]
    k: Option<usize>,
    /// Source graph (`.ins`), or NAE instance (JSON) for `nae-*` pipelines.
    #[arg(long = "in")]
    input: PathBuf,
    /// Output instance; provenance goes to `<out>.prov.json`.
    #[arg(long)]
    out: PathBuf,
    /// Star gadget for `nae-graph`.
    #[arg(long, default_value = "separating")]
    star: String,
}

#[derive(Serialize)]
struct TemplateInfo<'a> {
    name: &'a str,
    vertices: usize,
    terminals: &'a [usize],
}

#[derive(Serialize)]
struct ProvenanceFile<'a> {
    pipeline: Pipeline,
    rule: ColoringRule,
    r: usize,
    source_size: usize,
    vertices: usize,
    edges: usize,
    girth_claim: usize,
    girth: Option<usize>,
    degree_claim: DegreeClaim,
    degree: DegreeStats,
    provenance: &'a [Provenance],
    anchors: &'a [(usize, Anchor)],
    templates: Vec<TemplateInfo<'a>>,
    copies: &'a [GadgetCopy],
}

fn reduction_error(e: ReductionError) -> anyhow::Error {
    match e {
        ReductionError::Gadget(g) => gadget_error(g),
        ReductionError::Oracle(o) => gadget_error(o.into()),
        other => other.into(),
    }
}

fn reduce(args: &ReduceArgs, budget: &OracleBudget) -> anyhow::Result<ReductionOutput> {
    if args.pipeline.takes_nae() {
        anyhow::ensure!(args.r.unwrap_or(2) == 2, "{} reduces to 2-coloring; --r must be 2", args.pipeline);
        let inst: NaeInstance = read_json(&args.input)?;
        anyhow::ensure!(inst.values() == 2, "{} needs a two-valued NAE instance", args.pipeline);
        if let Some(k) = args.k {
            anyhow::ensure!(k == inst.width(), "--k must equal the clause width {}", inst.width());
        }
        let star: StarGadget = serde_json::from_value(serde_json::Value::String(args.star.clone()))
            .map_err(|_| anyhow::anyhow!("--star must be `separating` or `equalizing`"))?;
        return match args.pipeline {
            Pipeline::NaeGraph => {
                let entry = registry_get(GadgetKind::AcyclicGraph, 2, inst.width(), budget).map_err(gadget_error)?;
                reduce_nae_to_acyclic2_graph_with(&inst, &entry, star, budget)
            }
            _ => reduce_nae_to_acyclic2_digraph(&inst, budget),
        }
        .map_err(reduction_error);
    }
    let source = read_instance(&args.input)?.instance;
    if args.pipeline == Pipeline::SplitTree {
        return split_binary_tree(&source).map_err(reduction_error);
    }
    let Instance::Graph(g) = source else {
        anyhow::bail!("{} needs an undirected source graph", args.pipeline);
    };
    let r = args.r.ok_or_else(|| anyhow::anyhow!("--r is required for {}", args.pipeline))?;
    let k = args.k.ok_or_else(|| anyhow::anyhow!("--k is required for {}", args.pipeline))?;
    match args.pipeline {
        Pipeline::GirthColor => reduce_coloring_girth(&g, r, k, budget),
        Pipeline::ColorAcyclicGraph => reduce_coloring_to_acyclic_graph(&g, r, k, budget),
        _ => reduce_coloring_to_acyclic_digraph(&g, r, k, budget),
    }
    .map_err(reduction_error)
}

pub fn run(args: ReduceArgs, budget: &OracleBudget) -> anyhow::Result<Exit> {
    let out = reduce(&args, budget)?;
    let stats = out.instance.degree_stats();
    let file = InstanceFile::new(out.instance.clone())
        .with_meta("generator", "reduce")
        .with_meta("pipeline", out.pipeline)
        .with_meta("rule", format!("{:?}", out.rule).to_lowercase())
        .with_meta("r", out.r)
        .with_meta("girth-claim", out.girth_claim)
        .with_meta("degree-claim", out.degree_claim.enforced);
    emit_instance(Some(&args.out), &file)?;
    let prov = ProvenanceFile {
        pipeline: out.pipeline,
        rule: out.rule,
        r: out.r,
        source_size: out.source_size(),
        vertices: out.instance.n(),
        edges: out.instance.m(),
        girth_claim: out.girth_claim,
        girth: out.instance.girth(),
        degree_claim: out.degree_claim,
        degree: stats,
        provenance: &out.provenance,
        anchors: &out.anchors,
        templates: out
            .templates
            .iter()
            .map(|t| TemplateInfo {
                name: &t.name,
                vertices: t.instance.n(),
                terminals: &t.terminals,
            })
            .collect(),
        copies: &out.copies,
    };
    emit_json(Some(&sidecar(&args.out, "prov.json")), &prov)?;
    eprintln!(
        "{}: {} vertices, {} edges, girth {} (claim {}), max degree {} (claim {})",
        out.pipeline,
        out.instance.n(),
        out.instance.m(),
        out.instance.girth().map_or("none".into(), |g| g.to_string()),
        out.girth_claim,
        if out.instance.is_directed() { stats.max_in_degree.max(stats.max_out_degree) } else { stats.max_degree },
        out.degree_claim.enforced
    );
    Ok(Exit::Success)
}
