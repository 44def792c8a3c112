use std::path::PathBuf;

use acyclab_core::{is_valid_acyclic_coloring, Coloring, Instance, NaeInstance};
use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::files::{emit_json, read_instance, read_json};
use crate::Exit;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    Acyclic,
    Proper,
    Nae,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Instance file; NAE JSON for `--check nae`.
    #[arg(long = "in")]
    input: PathBuf,
    /// Coloring `{r, colors}`, an array of colors or values, or an oracle
    /// report whose `witness` is one of those.
    #[arg(long)]
    cert: PathBuf,
    #[arg(long, value_enum, default_value = "acyclic")]
    check: Check,
    /// Require at most this many colors.
    #[arg(long)]
    r: Option<usize>,
    /// JSON result; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Outcome {
    valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
}

fn colors_of(cert: Value) -> anyhow::Result<Vec<usize>> {
    let cert = match cert {
        Value::Object(mut map) if map.contains_key("witness") => map.remove("witness").unwrap_or(Value::Null),
        other => other,
    };
    match cert {
        Value::Array(_) => Ok(serde_json::from_value(cert)?),
        Value::Object(_) => Ok(serde_json::from_value::<Coloring>(cert)?.into_colors()),
        _ => anyhow::bail!("certificate is neither a coloring nor an array"),
    }
}

fn check(args: &VerifyArgs) -> anyhow::Result<Result<(), String>> {
    let colors = colors_of(read_json(&args.cert)?)?;
    if let Some(r) = args.r {
        if let Some((v, c)) = colors.iter().enumerate().find(|(_, &c)| c >= r) {
            return Ok(Err(format!("vertex {v} has color {c}, only {r} allowed")));
        }
    }
    if args.check == Check::Nae {
        let inst: NaeInstance = read_json(&args.input)?;
        return Ok(if inst.is_satisfied_by(&colors) {
            Ok(())
        } else {
            Err("assignment leaves a clause all-equal or has the wrong length".into())
        });
    }
    let inst = read_instance(&args.input)?.instance;
    let coloring = Coloring::from_colors(colors);
    let valid = match args.check {
        Check::Acyclic => is_valid_acyclic_coloring(&inst, &coloring),
        _ => match &inst {
            Instance::Graph(g) => g.is_proper_coloring(&coloring),
            Instance::Digraph(d) => d.underlying_graph().is_proper_coloring(&coloring),
            Instance::Tournament(t) => t.as_digraph().underlying_graph().is_proper_coloring(&coloring),
        },
    };
    Ok(match valid {
        Ok(true) => Ok(()),
        Ok(false) => Err(match args.check {
            Check::Acyclic => "a color class contains a cycle".into(),
            _ => "an edge joins two vertices of the same color".into(),
        }),
        Err(e) => Err(e.to_string()),
    })
}

pub fn run(args: VerifyArgs) -> anyhow::Result<Exit> {
    let result = check(&args)?;
    let outcome = Outcome {
        valid: result.is_ok(),
        reason: result.err(),
    };
    emit_json(args.out.as_deref(), &outcome)?;
    match &outcome.reason {
        None => {
            eprintln!("certificate valid");
            Ok(Exit::Success)
        }
        Some(r) => {
            eprintln!("certificate invalid: {r}");
            Ok(Exit::Negative)
        }
    }
}
