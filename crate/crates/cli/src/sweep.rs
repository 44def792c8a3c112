use std::path::{Path, PathBuf};
use std::time::Instant;

use acyclab_core::gadgets::{build_h_k_r, certify_h_k_r, h_k_r_size, refined_size_bound, CheckStatus};
use acyclab_core::tournaments::{generate_planted, recover, PlantedSpec};
use acyclab_core::OracleBudget;
use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::files::{emit, emit_json, parse_list, parse_seeds};
use crate::plant::RecoveryOptions;
use crate::Exit;

/// Gadgets larger than this are sized but not built.
const MAX_BUILT_GADGET: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Recovery,
    Gadget,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// Tournament sizes (recovery).
    #[arg(long, default_value = "300")]
    n: String,
    /// Class counts (recovery) or colors (gadget).
    #[arg(long, default_value = "3")]
    r: String,
    /// Concentration constants (recovery).
    #[arg(long, default_value = "0.5")]
    c: String,
    /// Girths (gadget).
    #[arg(long, default_value = "3")]
    k: String,
    /// `N` for seeds `0..N`, `a..b`, or a comma list; required for recovery.
    #[arg(long)]
    seeds: Option<String>,
    #[command(flatten)]
    recovery: RecoveryOptions,
    /// Certify every gadget with the oracle.
    #[arg(long)]
    verify: bool,
    /// Output directory for `sweep.csv` and `summary.json`.
    #[arg(long)]
    out: PathBuf,
    /// Zero the wall-clock columns so reruns are byte-identical.
    #[arg(long)]
    no_timings: bool,
}

#[derive(Serialize, Clone)]
#[serde(rename_all = "kebab-case")]
struct RecoveryRow {
    n: usize,
    r: usize,
    c: f64,
    seed: u64,
    phase1_rounds: Option<usize>,
    classes_found: Option<usize>,
    exact_match: Option<bool>,
    phase1_ms: Option<f64>,
    phase2_ms: Option<f64>,
    phase3_ms: Option<f64>,
    total_ms: Option<f64>,
    error: String,
}

const RECOVERY_HEADER: [&str; 12] = [
    "n", "r", "c", "seed", "phase1-rounds", "classes-found", "exact-match", "phase1-ms", "phase2-ms", "phase3-ms",
    "total-ms", "error",
];

#[derive(Serialize, Clone)]
#[serde(rename_all = "kebab-case")]
struct GadgetRow {
    k: usize,
    r: usize,
    vertices: Option<usize>,
    arcs: Option<usize>,
    k_pow_r: Option<u64>,
    refined_bound: Option<f64>,
    directed_girth: Option<usize>,
    certificate: String,
    wall_ms: Option<f64>,
    error: String,
}

const GADGET_HEADER: [&str; 10] = [
    "k", "r", "vertices", "arcs", "k-pow-r", "refined-bound", "directed-girth", "certificate", "wall-ms", "error",
];

#[derive(Serialize)]
struct RecoveryGroup {
    n: usize,
    r: usize,
    c: f64,
    runs: usize,
    errors: usize,
    exact: usize,
    success_rate: f64,
    classes_min: Option<usize>,
    classes_max: Option<usize>,
    classes_mean: Option<f64>,
    phase1_ms_median: Option<f64>,
    /// Median phase-1 time over that of the previous `n` with the same `r` and `c`.
    phase1_scaling: Option<f64>,
    total_ms_median: Option<f64>,
}

#[derive(Serialize)]
struct Summary<G: Serialize> {
    kind: Kind,
    cells: usize,
    errors: usize,
    groups: Vec<G>,
}

fn write_csv<T: Serialize>(path: &Path, header: &[&str], rows: &[T]) -> anyhow::Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.serialize(row)?;
    }
    emit(Some(path), &String::from_utf8(w.into_inner()?)?)
}

fn ms(x: f64) -> f64 {
    (x * 1e3).round() / 1e3
}

fn median(mut xs: Vec<f64>) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    Some(if xs.len() % 2 == 1 { xs[m] } else { (xs[m - 1] + xs[m]) / 2.0 })
}

fn recovery_cell(n: usize, r: usize, c: f64, seed: u64, opts: &RecoveryOptions) -> RecoveryRow {
    let mut row = RecoveryRow {
        n,
        r,
        c,
        seed,
        phase1_rounds: None,
        classes_found: None,
        exact_match: None,
        phase1_ms: None,
        phase2_ms: None,
        phase3_ms: None,
        total_ms: None,
        error: String::new(),
    };
    let spec = match PlantedSpec::equal(n, r, seed) {
        Ok(s) => s,
        Err(e) => {
            row.error = e.to_string();
            return row;
        }
    };
    let (t, truth) = generate_planted(&spec);
    match recover(&t, &opts.config(c)) {
        Ok(mut rep) => {
            rep.compare(&truth);
            row.phase1_rounds = Some(rep.phase1_classes);
            row.classes_found = Some(rep.classes.len());
            row.exact_match = rep.exact_match;
            let t = rep.times;
            row.phase1_ms = Some(ms(t.phase1_ms));
            row.phase2_ms = Some(ms(t.phase2_ms));
            row.phase3_ms = Some(ms(t.phase3_ms));
            row.total_ms = Some(ms(t.phase1_ms + t.phase2_ms + t.phase3_ms));
        }
        Err(e) => row.error = e.to_string(),
    }
    row
}

fn gadget_cell(k: usize, r: usize, verify: bool, budget: &OracleBudget) -> GadgetRow {
    let start = Instant::now();
    let mut row = GadgetRow {
        k,
        r,
        vertices: h_k_r_size(k, r),
        arcs: None,
        k_pow_r: u32::try_from(r).ok().and_then(|r| (k as u64).checked_pow(r)),
        refined_bound: refined_size_bound(k, r),
        directed_girth: None,
        certificate: "skipped".into(),
        wall_ms: None,
        error: String::new(),
    };
    if row.vertices.is_none_or(|v| v > MAX_BUILT_GADGET) {
        row.error = format!("not built: more than {MAX_BUILT_GADGET} vertices");
        return row;
    }
    match build_h_k_r(k, r) {
        Ok(g) => {
            row.arcs = Some(g.digraph.m());
            row.directed_girth = g.digraph.directed_girth();
            if verify {
                match certify_h_k_r(&g, k, r, budget) {
                    Ok(cert) => {
                        let worst = cert.checks.iter().map(|c| c.status).fold(CheckStatus::Verified, |a, s| {
                            match (a, s) {
                                (CheckStatus::Failed, _) | (_, CheckStatus::Failed) => CheckStatus::Failed,
                                (CheckStatus::Unverified, _) | (_, CheckStatus::Unverified) => CheckStatus::Unverified,
                                _ => CheckStatus::Verified,
                            }
                        });
                        row.certificate = format!("{worst:?}").to_lowercase();
                    }
                    Err(e) => row.error = e.to_string(),
                }
            }
        }
        Err(e) => row.error = e.to_string(),
    }
    row.wall_ms = Some(ms(start.elapsed().as_secs_f64() * 1e3));
    row
}

fn recovery_groups(rows: &[RecoveryRow]) -> Vec<RecoveryGroup> {
    let mut groups: Vec<RecoveryGroup> = Vec::new();
    let mut i = 0;
    while i < rows.len() {
        let (n, r, c) = (rows[i].n, rows[i].r, rows[i].c);
        let j = i + rows[i..].iter().take_while(|x| (x.n, x.r, x.c) == (n, r, c)).count();
        let cell = &rows[i..j];
        let ok: Vec<&RecoveryRow> = cell.iter().filter(|x| x.error.is_empty()).collect();
        let classes: Vec<usize> = ok.iter().filter_map(|x| x.classes_found).collect();
        let exact = ok.iter().filter(|x| x.exact_match == Some(true)).count();
        let p1 = median(ok.iter().filter_map(|x| x.phase1_ms).collect());
        let previous = groups
            .iter()
            .rev()
            .find(|g| g.r == r && g.c == c && g.n < n)
            .and_then(|g| g.phase1_ms_median);
        groups.push(RecoveryGroup {
            n,
            r,
            c,
            runs: cell.len(),
            errors: cell.len() - ok.len(),
            exact,
            success_rate: if cell.is_empty() { 0.0 } else { exact as f64 / cell.len() as f64 },
            classes_min: classes.iter().copied().min(),
            classes_max: classes.iter().copied().max(),
            classes_mean: (!classes.is_empty()).then(|| classes.iter().sum::<usize>() as f64 / classes.len() as f64),
            phase1_ms_median: p1,
            phase1_scaling: p1.zip(previous).filter(|&(_, b)| b > 0.0).map(|(a, b)| a / b),
            total_ms_median: median(ok.iter().filter_map(|x| x.total_ms).collect()),
        });
        i = j;
    }
    groups
}

pub fn run(args: SweepArgs, budget: &OracleBudget) -> anyhow::Result<Exit> {
    let rs: Vec<usize> = parse_list(&args.r)?;
    std::fs::create_dir_all(&args.out)?;
    let csv_path = args.out.join("sweep.csv");
    let summary_path = args.out.join("summary.json");
    match args.kind {
        Kind::Recovery => {
            let seeds = parse_seeds(args.seeds.as_deref().ok_or_else(|| anyhow::anyhow!("--seeds is required"))?)?;
            let ns: Vec<usize> = parse_list(&args.n)?;
            let cs: Vec<f64> = parse_list(&args.c)?;
            let mut cells = Vec::new();
            for &n in &ns {
                for &r in &rs {
                    for &c in &cs {
                        cells.extend(seeds.iter().map(|&s| (n, r, c, s)));
                    }
                }
            }
            let mut rows: Vec<RecoveryRow> = cells
                .par_iter()
                .map(|&(n, r, c, s)| recovery_cell(n, r, c, s, &args.recovery))
                .collect();
            let mut groups = recovery_groups(&rows);
            if args.no_timings {
                for row in &mut rows {
                    if row.error.is_empty() {
                        (row.phase1_ms, row.phase2_ms, row.phase3_ms, row.total_ms) =
                            (Some(0.0), Some(0.0), Some(0.0), Some(0.0));
                    }
                }
                for g in &mut groups {
                    (g.phase1_ms_median, g.phase1_scaling, g.total_ms_median) = (None, None, None);
                }
            }
            write_csv(&csv_path, &RECOVERY_HEADER, &rows)?;
            let errors = rows.iter().filter(|x| !x.error.is_empty()).count();
            for g in &groups {
                eprintln!(
                    "n={} r={} c={}: {}/{} exact, median phase 1 {} ms",
                    g.n,
                    g.r,
                    g.c,
                    g.exact,
                    g.runs,
                    g.phase1_ms_median.map_or("-".into(), |m| format!("{m:.1}"))
                );
            }
            emit_json(Some(&summary_path), &Summary { kind: args.kind, cells: rows.len(), errors, groups })?;
        }
        Kind::Gadget => {
            let ks: Vec<usize> = parse_list(&args.k)?;
            let cells: Vec<(usize, usize)> = ks.iter().flat_map(|&k| rs.iter().map(move |&r| (k, r))).collect();
            let mut rows: Vec<GadgetRow> = cells
                .par_iter()
                .map(|&(k, r)| gadget_cell(k, r, args.verify, budget))
                .collect();
            if args.no_timings {
                for row in &mut rows {
                    row.wall_ms = row.wall_ms.map(|_| 0.0);
                }
            }
            write_csv(&csv_path, &GADGET_HEADER, &rows)?;
            let errors = rows.iter().filter(|x| !x.error.is_empty()).count();
            for row in &rows {
                eprintln!(
                    "H^{}_{}: {} vertices (k^r = {})",
                    row.k,
                    row.r,
                    row.vertices.map_or("overflow".into(), |v| v.to_string()),
                    row.k_pow_r.map_or("overflow".into(), |v| v.to_string())
                );
            }
            emit_json(Some(&summary_path), &Summary { kind: args.kind, cells: rows.len(), errors, groups: rows })?;
        }
    }
    eprintln!("wrote {} and {}", csv_path.display(), summary_path.display());
    Ok(Exit::Success)
}
