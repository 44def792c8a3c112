use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::assemble::{max_degree, Builder};
use super::tree::plant_forest;
use super::{Anchor, DegreeClaim, GadgetTemplate, Pipeline, Provenance, ReductionError, ReductionOutput, Source};
use crate::gadgets::{
    build_h_k, derive_j1_j2, registry_get, GadgetError, GadgetKind, RegistryEntry, TerminalGadget,
};
use crate::graph::{Graph, Instance};
use crate::nae::NaeInstance;
use crate::oracle::{decide_acyclic_colorable, enumerate_acyclic_colorings, ColoringRule, OracleBudget, Verdict};

/// How a variable's star center is tied to its occurrences in the NAE to
/// acyclic graph reduction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StarGadget {
    /// `J2` copies: the center takes the other color and each occurrence is
    /// isolated in its class inside the copy.
    #[default]
    Separating,
    /// `J1` copies forcing center and occurrence equal. Each copy carries a
    /// monochromatic center-occurrence path, so two variables with equal values
    /// that are adjacent in two clauses close a monochromatic cycle.
    Equalizing,
}

fn template(name: &str, g: &TerminalGadget) -> GadgetTemplate {
    GadgetTemplate {
        name: name.to_string(),
        instance: g.instance.clone(),
        terminals: vec![g.terminals.0, g.terminals.1],
        witness: g.witness.clone(),
    }
}

fn ensure_forcing(g: &TerminalGadget) -> Result<(), ReductionError> {
    match g.certificate.failures().first() {
        Some(p) => Err(GadgetError::ConstructionBug {
            property: p.clone(),
            detail: format!("{} does not force its terminals", g.certificate.name),
        }
        .into()),
        None => Ok(()),
    }
}

fn check_entry(entry: &RegistryEntry, kind: GadgetKind, r: usize, k: usize) -> Result<(), ReductionError> {
    if entry.kind != kind || entry.r != r {
        return Err(ReductionError::Unsupported(format!(
            "gadget is {} for r={}, need {kind} for r={r}",
            entry.kind, entry.r
        )));
    }
    if entry.instance.girth().is_some_and(|g| g < k) {
        return Err(ReductionError::Unsupported(format!("gadget girth is below {k}")));
    }
    Ok(())
}

fn tree_claim(templates: &[&GadgetTemplate]) -> DegreeClaim {
    let tdeg = templates
        .iter()
        .map(|t| max_degree(&t.instance, t.terminals.iter().copied()))
        .max()
        .unwrap_or(0);
    let gdeg = templates
        .iter()
        .map(|t| max_degree(&t.instance, 0..t.instance.n()))
        .max()
        .unwrap_or(0);
    DegreeClaim {
        // a tree node meets at most three copies; a lone leaf edge adds one
        enforced: (3 * tdeg).max(gdeg).max(1),
        by_gadget_degree: 3 * gdeg,
        by_terminal_degree: 3 * tdeg,
    }
}

/// Proper `r`-coloring to proper `r`-coloring with girth at least `k` and
/// bounded degree: split vertices into trees, then replace each tree edge by
/// `J = K - uv` for a registry gadget `K`.
pub fn reduce_coloring_girth(g: &Graph, r: usize, k: usize, budget: &OracleBudget) -> Result<ReductionOutput, ReductionError> {
    let entry = registry_get(GadgetKind::Proper, r, k, budget)?;
    reduce_coloring_girth_with(g, r, k, &entry, budget)
}

pub fn reduce_coloring_girth_with(
    g: &Graph,
    r: usize,
    k: usize,
    entry: &RegistryEntry,
    budget: &OracleBudget,
) -> Result<ReductionOutput, ReductionError> {
    check_entry(entry, GadgetKind::Proper, r, k)?;
    let j = TerminalGadget::from_critical("J", &entry.instance, entry.critical_edge, ColoringRule::Proper, r, budget)?;
    ensure_forcing(&j)?;
    let tpl = template("J", &j);
    let claim = tree_claim(&[&tpl]);
    let mut b = Builder::new(false);
    let forest = plant_forest(g, &mut b);
    let t = b.template(tpl);
    for x in 0..g.n() {
        for (p, c) in forest.shapes[x].edges() {
            b.attach(t, &[forest.ids[x][p], forest.ids[x][c]]);
        }
    }
    for (x, y) in g.edges() {
        b.edge(forest.leaf(g, x, y), forest.leaf(g, y, x));
    }
    b.finish(Pipeline::GirthColor, ColoringRule::Proper, r, k, claim, Source::Graph(g.clone()))
}

/// Proper `r`-coloring to acyclic `r`-coloring of a graph: tree edges become
/// `J1` (terminals forced equal), source edges become `J2` (forced different).
pub fn reduce_coloring_to_acyclic_graph(
    g: &Graph,
    r: usize,
    k: usize,
    budget: &OracleBudget,
) -> Result<ReductionOutput, ReductionError> {
    let entry = registry_get(GadgetKind::AcyclicGraph, r, k, budget)?;
    reduce_coloring_to_acyclic_graph_with(g, r, k, &entry, budget)
}

pub fn reduce_coloring_to_acyclic_graph_with(
    g: &Graph,
    r: usize,
    k: usize,
    entry: &RegistryEntry,
    budget: &OracleBudget,
) -> Result<ReductionOutput, ReductionError> {
    check_entry(entry, GadgetKind::AcyclicGraph, r, k)?;
    color_to_acyclic(g, r, k, entry, false, budget)
}

/// Directed version of [`reduce_coloring_to_acyclic_graph`] with gadgets cut
/// from `H^k_r`; trees point away from their roots.
pub fn reduce_coloring_to_acyclic_digraph(
    g: &Graph,
    r: usize,
    k: usize,
    budget: &OracleBudget,
) -> Result<ReductionOutput, ReductionError> {
    let entry = registry_get(GadgetKind::AcyclicDigraph, r, k, budget)?;
    reduce_coloring_to_acyclic_digraph_with(g, r, k, &entry, budget)
}

pub fn reduce_coloring_to_acyclic_digraph_with(
    g: &Graph,
    r: usize,
    k: usize,
    entry: &RegistryEntry,
    budget: &OracleBudget,
) -> Result<ReductionOutput, ReductionError> {
    check_entry(entry, GadgetKind::AcyclicDigraph, r, k)?;
    color_to_acyclic(g, r, k, entry, true, budget)
}

fn color_to_acyclic(
    g: &Graph,
    r: usize,
    k: usize,
    entry: &RegistryEntry,
    directed: bool,
    budget: &OracleBudget,
) -> Result<ReductionOutput, ReductionError> {
    let jj = derive_j1_j2(&entry.instance, entry.critical_edge, r, budget)?;
    let (t1, t2) = (template("J1", &jj.j1), template("J2", &jj.j2));
    let claim = tree_claim(&[&t1, &t2]);
    let mut b = Builder::new(directed);
    let forest = plant_forest(g, &mut b);
    let (t1, t2) = (b.template(t1), b.template(t2));
    for x in 0..g.n() {
        for (p, c) in forest.shapes[x].edges() {
            b.attach(t1, &[forest.ids[x][p], forest.ids[x][c]]);
        }
    }
    for (x, y) in g.edges() {
        b.attach(t2, &[forest.leaf(g, x, y), forest.leaf(g, y, x)]);
    }
    let pipeline = if directed {
        Pipeline::ColorAcyclicDigraph
    } else {
        Pipeline::ColorAcyclicGraph
    };
    b.finish(pipeline, ColoringRule::Acyclic, r, k, claim, Source::Graph(g.clone()))
}

fn check_nae(inst: &NaeInstance) -> Result<usize, ReductionError> {
    if inst.values() != 2 {
        return Err(ReductionError::Unsupported(format!(
            "only two-valued instances reduce to acyclic 2-coloring, got {} values",
            inst.values()
        )));
    }
    if inst.width() < 3 {
        return Err(ReductionError::Unsupported("clause width must be at least 3".into()));
    }
    Ok(inst.width())
}

/// One output vertex per clause position, joined into a cycle per clause.
fn clause_cycles(inst: &NaeInstance, b: &mut Builder) -> Vec<Vec<usize>> {
    let mut occ_vertices = vec![Vec::new(); inst.vars()];
    for (ci, clause) in inst.clauses().iter().enumerate() {
        let ids: Vec<usize> = clause
            .iter()
            .enumerate()
            .map(|(position, &x)| {
                let v = b.anchor(Provenance::Occurrence { clause: ci, position }, Anchor::Carrier(x));
                occ_vertices[x].push(v);
                v
            })
            .collect();
        for i in 0..ids.len() {
            b.edge(ids[i], ids[(i + 1) % ids.len()]);
        }
    }
    occ_vertices
}

/// Two-valued NAE to acyclic 2-coloring of a graph: clause cycles plus one star
/// per variable whose edges are gadget copies.
pub fn reduce_nae_to_acyclic2_graph(inst: &NaeInstance, budget: &OracleBudget) -> Result<ReductionOutput, ReductionError> {
    let k = check_nae(inst)?;
    let entry = registry_get(GadgetKind::AcyclicGraph, 2, k, budget)?;
    reduce_nae_to_acyclic2_graph_with(inst, &entry, StarGadget::default(), budget)
}

pub fn reduce_nae_to_acyclic2_graph_with(
    inst: &NaeInstance,
    entry: &RegistryEntry,
    star: StarGadget,
    budget: &OracleBudget,
) -> Result<ReductionOutput, ReductionError> {
    let k = check_nae(inst)?;
    check_entry(entry, GadgetKind::AcyclicGraph, 2, k)?;
    let jj = derive_j1_j2(&entry.instance, entry.critical_edge, 2, budget)?;
    let (gadget, hub_anchor): (_, fn(usize) -> Anchor) = match star {
        StarGadget::Separating => (template("J2", &jj.j2), Anchor::Opposite),
        StarGadget::Equalizing => (template("J1", &jj.j1), Anchor::Carrier),
    };
    let tdeg_hub = max_degree(&gadget.instance, [gadget.terminals[0]].into_iter());
    let tdeg_occ = max_degree(&gadget.instance, [gadget.terminals[1]].into_iter());
    let gdeg = max_degree(&gadget.instance, 0..gadget.instance.n());
    let t_max = inst.occurrences().iter().map(Vec::len).max().unwrap_or(0);
    let claim = DegreeClaim {
        enforced: (t_max * tdeg_hub).max(2 + tdeg_occ).max(gdeg),
        by_gadget_degree: 3 * gdeg,
        by_terminal_degree: 3 * tdeg_hub.max(tdeg_occ),
    };
    let mut b = Builder::new(false);
    let occ = clause_cycles(inst, &mut b);
    let hubs: Vec<usize> = (0..inst.vars())
        .map(|x| b.anchor(Provenance::Hub { variable: x }, hub_anchor(x)))
        .collect();
    let t = b.template(gadget);
    for x in 0..inst.vars() {
        for &o in &occ[x] {
            b.attach(t, &[hubs[x], o]);
        }
    }
    b.finish(Pipeline::NaeGraph, ColoringRule::Acyclic, 2, k, claim, Source::Nae(inst.clone()))
}

/// Two-valued NAE to acyclic 2-coloring of a digraph: directed clause cycles
/// plus one `H_k` per variable whose `S_1` is glued to the occurrences.
pub fn reduce_nae_to_acyclic2_digraph(inst: &NaeInstance, budget: &OracleBudget) -> Result<ReductionOutput, ReductionError> {
    let k = check_nae(inst)?;
    let occurrences = inst.occurrences();
    let mut by_t: BTreeMap<usize, GadgetTemplate> = BTreeMap::new();
    for t in occurrences.iter().map(Vec::len).filter(|&t| t > 0) {
        if by_t.contains_key(&t) {
            continue;
        }
        let h = build_h_k(k, t)?;
        let hd = Instance::Digraph(h.digraph.clone());
        let witness = match decide_acyclic_colorable(&hd, 2, budget)?.verdict {
            Verdict::Yes(w) => w,
            _ => return Err(ReductionError::Unsupported(format!("no 2-coloring of H_{k} with {t} terminals found"))),
        };
        // S_1 must be monochromatic and differ from S_0 in every coloring.
        let mut broken = false;
        enumerate_acyclic_colorings(&hd, 2, budget, |c| {
            let s = c.color(h.s1[0]);
            broken = h.s1.iter().any(|&v| c.color(v) != s) || c.color(h.s0) == s;
            !broken
        })?;
        if broken {
            return Err(GadgetError::ConstructionBug {
                property: "layer forcing".into(),
                detail: format!("H_{k} with {t} terminals"),
            }
            .into());
        }
        by_t.insert(
            t,
            GadgetTemplate {
                name: format!("H_{k}[{t}]"),
                instance: hd,
                terminals: h.s1.clone(),
                witness,
            },
        );
    }
    let t_max = by_t.keys().max().copied().unwrap_or(0);
    let gdeg = by_t.values().map(|t| max_degree(&t.instance, 0..t.instance.n())).max().unwrap_or(0);
    let tdeg = by_t
        .values()
        .map(|t| max_degree(&t.instance, t.terminals.iter().copied()))
        .max()
        .unwrap_or(0);
    let claim = DegreeClaim {
        enforced: k.max(t_max) + 1,
        by_gadget_degree: 3 * gdeg,
        by_terminal_degree: 3 * tdeg,
    };
    let mut b = Builder::new(true);
    let occ = clause_cycles(inst, &mut b);
    let ids: BTreeMap<usize, usize> = by_t.into_iter().map(|(t, tpl)| (t, b.template(tpl))).collect();
    for targets in occ.iter().filter(|o| !o.is_empty()) {
        b.attach(ids[&targets.len()], targets);
    }
    b.finish(Pipeline::NaeDigraph, ColoringRule::Acyclic, 2, k, claim, Source::Nae(inst.clone()))
}
