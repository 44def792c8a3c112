use std::path::PathBuf;

use acyclab_core::amplifier::{blow_up, count_biacyclic_pairs, random_bipartite_orientation, BlowupSpec};
use acyclab_core::{Coloring, Instance, InstanceFile, OracleBudget};
use clap::Args;
use rayon::prelude::*;
use serde::Serialize;

use crate::files::{emit, emit_instance, emit_json, parse_seeds, read_instance, read_json, sidecar};
use crate::Exit;

#[derive(Args, Debug)]
pub struct AmplifyArgs {
    /// Source graph.
    #[arg(long = "in")]
    input: PathBuf,
    /// Block size; the number of source vertices by default.
    #[arg(long)]
    block: Option<usize>,
    #[arg(long)]
    seed: u64,
    /// Proper coloring of the source (JSON `{r, colors}`); found by the oracle if absent.
    #[arg(long)]
    coloring: Option<PathBuf>,
    /// Output digraph; the block-copied coloring goes to `<out>.coloring.json`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
pub struct BipartiteArgs {
    /// Side size of the complete bipartite graph.
    #[arg(long)]
    n: usize,
    /// Side size of the searched pairs.
    #[arg(long)]
    m: usize,
    /// `N` for seeds `0..N`, `a..b`, or a comma list.
    #[arg(long)]
    seeds: String,
    /// Stop each search after this many pairs.
    #[arg(long)]
    max_pairs: Option<u64>,
    /// CSV file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
#[serde(rename_all = "kebab-case")]
struct BipartiteRow {
    seed: u64,
    pairs_searched: u64,
    acyclic_pairs_found: u64,
    total_pairs: u64,
    exhaustive: bool,
}

pub fn amplify(args: AmplifyArgs, budget: &OracleBudget) -> anyhow::Result<Exit> {
    let Instance::Graph(g) = read_instance(&args.input)?.instance else {
        anyhow::bail!("amplify needs an undirected source graph");
    };
    let coloring: Option<Coloring> = args.coloring.as_deref().map(read_json).transpose()?;
    let mut spec = BlowupSpec::new(g, args.seed);
    if let Some(b) = args.block {
        spec = spec.with_block(b);
    }
    let out = blow_up(&spec, coloring.as_ref(), budget)?;
    let file = InstanceFile::new(out.digraph.clone())
        .with_meta("generator", "blow-up")
        .with_meta("block", spec.block)
        .with_meta("seed", args.seed);
    emit_instance(Some(&args.out), &file)?;
    if let Some(c) = &out.planted {
        emit_json(Some(&sidecar(&args.out, "coloring.json")), c)?;
    }
    if let Some(w) = &out.warning {
        eprintln!("warning: {w}");
    }
    eprintln!(
        "blow-up: {} vertices, {} arcs, planted {}-coloring {}",
        out.digraph.n(),
        out.digraph.m(),
        out.planted.as_ref().map_or(0, Coloring::r),
        if out.planted.is_some() { "written" } else { "omitted" }
    );
    Ok(if out.planted.is_some() { Exit::Success } else { Exit::Inconclusive })
}

pub fn bipartite(args: BipartiteArgs) -> anyhow::Result<Exit> {
    anyhow::ensure!(args.m <= args.n, "--m must be at most --n");
    let seeds = parse_seeds(&args.seeds)?;
    let limit = args.max_pairs.unwrap_or(u64::MAX);
    let rows = seeds
        .par_iter()
        .map(|&seed| {
            let h = random_bipartite_orientation(args.n, seed);
            let s = count_biacyclic_pairs(&h, args.n, args.m, limit)?;
            Ok(BipartiteRow {
                seed,
                pairs_searched: s.searched,
                acyclic_pairs_found: s.acyclic,
                total_pairs: s.total,
                exhaustive: s.exhaustive,
            })
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(["seed", "pairs-searched", "acyclic-pairs-found", "total-pairs", "exhaustive"])?;
    }
    for row in &rows {
        w.serialize(row)?;
    }
    emit(args.out.as_deref(), &String::from_utf8(w.into_inner()?)?)?;
    for row in &rows {
        eprintln!(
            "seed {}: {}/{} pairs acyclic ({:.3}%)",
            row.seed,
            row.acyclic_pairs_found,
            row.pairs_searched,
            100.0 * row.acyclic_pairs_found as f64 / row.pairs_searched.max(1) as f64
        );
    }
    Ok(if rows.iter().all(|r| r.exhaustive) { Exit::Success } else { Exit::Inconclusive })
}
