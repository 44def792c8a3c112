//! Plain-text instance files.
//!
//! ```text
//! p digraph 3 3
//! c generator=hkr
//! e 0 1
//! e 1 2
//! e 2 0
//! ```
//!
//! `c key=value` lines may appear anywhere after the header. The writer emits
//! metadata sorted by key directly after the header, then records in
//! lexicographic order, so equal instances always produce equal bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::graph::{Digraph, Graph, GraphError, Instance, InstanceKind, Tournament};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("header declares {declared} records but the file has {found}")]
    CountMismatch { declared: usize, found: usize },
    #[error("invariant violated: {0}")]
    Invariant(#[from] GraphError),
}

fn parse_err(line: usize, message: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        message: message.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceFile {
    pub instance: Instance,
    pub metadata: BTreeMap<String, String>,
}

impl InstanceFile {
    pub fn new(instance: impl Into<Instance>) -> Self {
        InstanceFile {
            instance: instance.into(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn with_meta(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.metadata.insert(key.into(), value.to_string());
        self
    }
}

impl From<Instance> for InstanceFile {
    fn from(instance: Instance) -> Self {
        InstanceFile::new(instance)
    }
}

pub fn to_text(file: &InstanceFile) -> String {
    let inst = &file.instance;
    let mut out = String::new();
    let _ = writeln!(out, "p {} {} {}", inst.kind().as_str(), inst.n(), inst.m());
    for (k, v) in &file.metadata {
        let _ = writeln!(out, "c {}={}", k, v.replace('\n', " "));
    }
    for (u, v) in inst.edge_list() {
        let _ = writeln!(out, "e {} {}", u, v);
    }
    out
}

pub fn parse(text: &str) -> Result<InstanceFile, IoError> {
    let mut header: Option<(InstanceKind, usize, usize)> = None;
    let mut metadata = BTreeMap::new();
    let mut records = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let (tag, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match tag {
            "p" if header.is_none() => {
                let fields: Vec<&str> = rest.split_whitespace().collect();
                if fields.len() != 3 {
                    return Err(parse_err(lineno, "header must be `p <kind> <n> <m>`"));
                }
                let kind = match fields[0] {
                    "graph" => InstanceKind::Graph,
                    "digraph" => InstanceKind::Digraph,
                    "tournament" => InstanceKind::Tournament,
                    other => return Err(parse_err(lineno, format!("unknown instance kind `{other}`"))),
                };
                let n = parse_usize(fields[1], lineno, "vertex count")?;
                let m = parse_usize(fields[2], lineno, "record count")?;
                header = Some((kind, n, m));
            }
            "p" => return Err(parse_err(lineno, "second header line")),
            _ if header.is_none() => {
                return Err(parse_err(lineno, "expected header `p <kind> <n> <m>` first"));
            }
            "c" => {
                if let Some((k, v)) = rest.split_once('=') {
                    metadata.insert(k.trim().to_string(), v.trim().to_string());
                }
                // Free-form comments without `=` are accepted and dropped.
            }
            "e" => {
                let fields: Vec<&str> = rest.split_whitespace().collect();
                if fields.len() != 2 {
                    return Err(parse_err(lineno, "record must be `e <u> <v>`"));
                }
                let u = parse_usize(fields[0], lineno, "endpoint")?;
                let v = parse_usize(fields[1], lineno, "endpoint")?;
                let n = header.map(|h| h.1).unwrap_or(0);
                for x in [u, v] {
                    if x >= n {
                        return Err(parse_err(lineno, format!("endpoint {x} out of range for {n} vertices")));
                    }
                }
                if u == v {
                    return Err(parse_err(lineno, format!("self-loop at vertex {u}")));
                }
                records.push((u, v));
            }
            other => return Err(parse_err(lineno, format!("unknown line tag `{other}`"))),
        }
    }
    let (kind, n, m) = header.ok_or_else(|| parse_err(1, "missing header"))?;
    if records.len() != m {
        return Err(IoError::CountMismatch {
            declared: m,
            found: records.len(),
        });
    }
    let instance = match kind {
        InstanceKind::Graph => Instance::Graph(Graph::new(n, records)?),
        InstanceKind::Digraph => Instance::Digraph(Digraph::new(n, records)?),
        InstanceKind::Tournament => Instance::Tournament(Tournament::new(Digraph::new(n, records)?)?),
    };
    Ok(InstanceFile { instance, metadata })
}

fn parse_usize(s: &str, line: usize, what: &str) -> Result<usize, IoError> {
    s.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} `{s}`")))
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<InstanceFile, IoError> {
    parse(&std::fs::read_to_string(path)?)
}

pub fn write_instance(path: impl AsRef<Path>, file: &InstanceFile) -> Result<(), IoError> {
    std::fs::write(path, to_text(file))?;
    Ok(())
}
