use std::path::PathBuf;

use acyclab_core::gadgets::{
    build_h_k, build_h_k_r, build_nae_hard_instance, certify_h_k_r, certify_user_gadget, derive_j1_j2, registry_get,
    CheckStatus, GadgetCertificate, GadgetError, GadgetKind,
};
use acyclab_core::oracle::OracleError;
use acyclab_core::{Instance, InstanceFile, OracleBudget};
use clap::{Args, Subcommand};

use crate::files::{emit_instance, emit_json, read_instance, sidecar};
use crate::{Exit, OutOfBudget};

#[derive(Args, Debug)]
pub struct GadgetArgs {
    #[command(subcommand)]
    which: Which,
}

#[derive(Subcommand, Debug)]
enum Which {
    /// The recursive digraph H^k_r.
    Hkr {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        /// Run every certificate check and write `<out>.cert.json`.
        #[arg(long)]
        verify: bool,
        /// Instance file; defaults to `hkr-k<k>-r<r>.ins`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A registry gadget, or a user gadget certified from `--file`.
    Registry {
        #[arg(long)]
        kind: GadgetKind,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        file: Option<PathBuf>,
        /// Defaults to `registry-<kind>-r<r>-k<k>.ins`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The layered two-coloring gadget H_k with `t` attachment terminals.
    Hk {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: usize,
        /// Defaults to `hk-k<k>-t<t>.ins`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Equality and inequality gadgets derived from H^k_r minus its first arc.
    J1j2 {
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        r: usize,
        /// Output prefix; writes `<prefix>.j1.ins` and `<prefix>.j2.ins`.
        #[arg(long, default_value = "j1j2")]
        prefix: String,
    },
    /// Every k-subset of (k-1)r+1 variables as an NAE clause, as JSON.
    NaeHard {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        k: usize,
        /// Defaults to `nae-hard-r<r>-k<k>.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn gadget_error(e: GadgetError) -> anyhow::Error {
    match e {
        GadgetError::Oracle(OracleError::CriticalInconclusive { .. }) => OutOfBudget(e.to_string()).into(),
        other => other.into(),
    }
}

fn certificate_exit(cert: &GadgetCertificate) -> Exit {
    if cert.checks.iter().any(|c| c.status == CheckStatus::Failed) {
        Exit::Negative
    } else if cert.checks.iter().any(|c| c.status == CheckStatus::Unverified) {
        Exit::Inconclusive
    } else {
        Exit::Success
    }
}

fn summarize(cert: &GadgetCertificate) {
    eprintln!(
        "{}: {} vertices, {} edges, girth {}",
        cert.name,
        cert.vertices,
        cert.edges,
        cert.girth.map_or("none".to_string(), |g| g.to_string())
    );
    for c in &cert.checks {
        eprintln!("  {:<16} {:<10} {}", c.property, format!("{:?}", c.status).to_lowercase(), c.detail);
    }
}

pub fn run(args: GadgetArgs, budget: &OracleBudget) -> anyhow::Result<Exit> {
    match args.which {
        Which::Hkr { k, r, verify, out } => {
            let g = build_h_k_r(k, r).map_err(gadget_error)?;
            let out = out.unwrap_or_else(|| PathBuf::from(format!("hkr-k{k}-r{r}.ins")));
            let file = InstanceFile::new(g.digraph.clone())
                .with_meta("generator", "hkr")
                .with_meta("k", k)
                .with_meta("r", r);
            emit_instance(Some(&out), &file)?;
            if !verify {
                eprintln!("H^{k}_{r}: {} vertices, {} arcs -> {}", g.digraph.n(), g.digraph.m(), out.display());
                return Ok(Exit::Success);
            }
            let cert = certify_h_k_r(&g, k, r, budget).map_err(gadget_error)?;
            emit_json(Some(&sidecar(&out, "cert.json")), &cert)?;
            summarize(&cert);
            Ok(certificate_exit(&cert))
        }
        Which::Registry { kind, r, k, file, out } => {
            let entry = match file {
                Some(path) => certify_user_gadget(kind, r, k, &read_instance(&path)?.instance, budget),
                None => registry_get(kind, r, k, budget),
            };
            let entry = match entry {
                Ok(e) => e,
                Err(GadgetError::Rejected { failed }) => {
                    eprintln!("gadget rejected: {}", failed.join(", "));
                    return Ok(Exit::Negative);
                }
                Err(e) => return Err(gadget_error(e)),
            };
            let out = out.unwrap_or_else(|| PathBuf::from(format!("registry-{kind}-r{r}-k{k}.ins")));
            let (u, v) = entry.critical_edge;
            let file = InstanceFile::new(entry.instance.clone())
                .with_meta("generator", "registry")
                .with_meta("gadget", &entry.name)
                .with_meta("kind", kind)
                .with_meta("r", r)
                .with_meta("k", k)
                .with_meta("critical-edge", format!("{u},{v}"));
            emit_instance(Some(&out), &file)?;
            emit_json(Some(&sidecar(&out, "cert.json")), &entry.certificate)?;
            summarize(&entry.certificate);
            Ok(certificate_exit(&entry.certificate))
        }
        Which::Hk { k, t, out } => {
            let h = build_h_k(k, t).map_err(gadget_error)?;
            let out = out.unwrap_or_else(|| PathBuf::from(format!("hk-k{k}-t{t}.ins")));
            let s1: Vec<String> = h.s1.iter().map(usize::to_string).collect();
            let file = InstanceFile::new(h.digraph.clone())
                .with_meta("generator", "hk")
                .with_meta("k", k)
                .with_meta("t", t)
                .with_meta("s0", h.s0)
                .with_meta("s1", s1.join(","));
            emit_instance(Some(&out), &file)?;
            eprintln!("H_{k} with t={t}: {} vertices, {} arcs -> {}", h.digraph.n(), h.digraph.m(), out.display());
            Ok(Exit::Success)
        }
        Which::J1j2 { k, r, prefix } => {
            let h = build_h_k_r(k, r).map_err(gadget_error)?;
            let uv = h.digraph.arcs().next().ok_or_else(|| anyhow::anyhow!("H^{k}_{r} has no arcs"))?;
            let jj = derive_j1_j2(&Instance::Digraph(h.digraph), uv, r, budget).map_err(gadget_error)?;
            for (name, g) in [("j1", &jj.j1), ("j2", &jj.j2)] {
                let path = PathBuf::from(format!("{prefix}.{name}.ins"));
                let (a, b) = g.terminals;
                let file = InstanceFile::new(g.instance.clone())
                    .with_meta("generator", name)
                    .with_meta("k", k)
                    .with_meta("r", r)
                    .with_meta("terminals", format!("{a},{b}"))
                    .with_meta("forcing", format!("{:?}", g.forcing).to_lowercase());
                emit_instance(Some(&path), &file)?;
                eprintln!("{name}: {} vertices, terminals {a},{b} -> {}", g.instance.n(), path.display());
            }
            Ok(Exit::Success)
        }
        Which::NaeHard { r, k, out } => {
            anyhow::ensure!(r >= 1 && k >= 2, "need r >= 1 and k >= 2");
            let inst = build_nae_hard_instance(r, k);
            let out = out.unwrap_or_else(|| PathBuf::from(format!("nae-hard-r{r}-k{k}.json")));
            emit_json(Some(&out), &inst)?;
            eprintln!("{} variables, {} clauses -> {}", inst.vars(), inst.clauses().len(), out.display());
            Ok(Exit::Success)
        }
    }
}
