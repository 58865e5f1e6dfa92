//! Negative instances and tampered labels for soundness experiments.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cert::{Certificate, EncodingParams, FieldClass, LabelAssignment, ProveError, ProveMode, Scheme};
use crate::graph::{Edge, EdgeSet, NodeId, WeightedGraph, MAX_WEIGHT};
use crate::mst::{check_cycle_property, is_spanning_tree};
use crate::tree::{root_at, RootedTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MutationKind {
    /// Swap a tree edge for a strictly heavier non-tree edge closing a cycle through it.
    SwapToHeavier,
    /// Deselect one tree edge.
    DeselectEdge,
    /// Select one non-tree edge.
    SelectExtraEdge,
    /// Raise a tree edge above a non-tree edge whose cycle contains it.
    ReweightTreeEdgeUp,
}

impl MutationKind {
    pub const ALL: [MutationKind; 4] = [
        MutationKind::SwapToHeavier,
        MutationKind::DeselectEdge,
        MutationKind::SelectExtraEdge,
        MutationKind::ReweightTreeEdgeUp,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MutationKind::SwapToHeavier => "swap-to-heavier",
            MutationKind::DeselectEdge => "deselect-edge",
            MutationKind::SelectExtraEdge => "select-extra-edge",
            MutationKind::ReweightTreeEdgeUp => "reweight-tree-edge-up",
        }
    }

    /// Whether the mutated selection is still a spanning tree.
    pub fn keeps_spanning_tree(self) -> bool {
        matches!(self, MutationKind::SwapToHeavier | MutationKind::ReweightTreeEdgeUp)
    }
}

impl fmt::Display for MutationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MutationKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MutationKind::ALL.into_iter().find(|k| k.as_str() == s).ok_or_else(|| format!("unknown mutation kind {s:?}"))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MutateError {
    #[error("selection is not a spanning tree")]
    NotSpanningTree,
    #[error("{kind} does not apply: {reason}")]
    Inapplicable { kind: MutationKind, reason: &'static str },
    #[error("{0} left a minimum spanning tree")]
    StillMinimal(MutationKind),
}

/// Non-tree edges `f` whose tree path holds an edge strictly lighter than `f`.
fn violating_candidates<'a>(g: &'a WeightedGraph, t: &RootedTree) -> Vec<(&'a Edge, Vec<Edge>)> {
    g.edges()
        .iter()
        .filter(|f| !f.selected)
        .filter_map(|f| {
            let path = t.path(g.index_of(f.u)?, g.index_of(f.v)?);
            let lighter: Vec<Edge> = path
                .windows(2)
                .map(|p| *g.edge(g.id(p[0]), g.id(p[1])).expect("tree edges are graph edges"))
                .filter(|e| e.w < f.w)
                .collect();
            (!lighter.is_empty()).then_some((f, lighter))
        })
        .collect()
}

/// Turns an instance whose selection is a spanning tree into one whose selection is
/// not a minimum spanning tree. Deterministic in `seed`.
pub fn mutate_instance(g: &WeightedGraph, kind: MutationKind, seed: u64) -> Result<WeightedGraph, MutateError> {
    let tree = g.selected_edges();
    if !is_spanning_tree(g, &tree) {
        return Err(MutateError::NotSpanningTree);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inapplicable = |reason| MutateError::Inapplicable { kind, reason };
    let tree_edges: Vec<&Edge> = g.edges().iter().filter(|e| e.selected).collect();
    let other_edges: Vec<&Edge> = g.edges().iter().filter(|e| !e.selected).collect();

    let out = match kind {
        MutationKind::DeselectEdge => {
            let e = tree_edges.choose(&mut rng).ok_or(inapplicable("no tree edge"))?;
            let mut sel = tree.clone();
            sel.remove(&e.ends());
            g.with_selection(&sel)
        }
        MutationKind::SelectExtraEdge => {
            let e = other_edges.choose(&mut rng).ok_or(inapplicable("no non-tree edge"))?;
            let mut sel = tree.clone();
            sel.insert(e.ends());
            g.with_selection(&sel)
        }
        MutationKind::SwapToHeavier => {
            if other_edges.is_empty() {
                return Err(inapplicable("no non-tree edge"));
            }
            let t = root_at(g, &tree, g.id(0)).expect("checked above");
            let candidates = violating_candidates(g, &t);
            let (f, lighter) = candidates
                .choose(&mut rng)
                .ok_or(inapplicable("no non-tree edge is strictly heavier than its cycle"))?;
            let heaviest = lighter.iter().max_by_key(|e| e.key()).unwrap();
            let mut sel: EdgeSet = tree.clone();
            sel.remove(&heaviest.ends());
            sel.insert(f.ends());
            g.with_selection(&sel)
        }
        MutationKind::ReweightTreeEdgeUp => {
            let f = other_edges.choose(&mut rng).ok_or(inapplicable("no non-tree edge"))?;
            if f.w >= MAX_WEIGHT {
                return Err(inapplicable("weight would exceed the maximum"));
            }
            let t = root_at(g, &tree, g.id(0)).expect("checked above");
            let path = t.path(g.index_of(f.u).unwrap(), g.index_of(f.v).unwrap());
            let k = rng.gen_range(0..path.len() - 1);
            g.with_weight(g.id(path[k]), g.id(path[k + 1]), f.w + 1).expect("tree edges are graph edges")
        }
    };
    let sel = out.selected_edges();
    if is_spanning_tree(&out, &sel) && check_cycle_property(&out, &sel).unwrap_or(false) {
        return Err(MutateError::StillMinimal(kind));
    }
    Ok(out)
}

/// A different value of the same field class, or `None` when the class has a single value.
pub fn replacement_value(
    class: FieldClass,
    old: u64,
    g: &WeightedGraph,
    params: &EncodingParams,
    rng: &mut impl Rng,
) -> Option<u64> {
    let n = g.node_count() as u64;
    let range = match class {
        FieldClass::RootId | FieldClass::Id => (0, params.max_id()),
        FieldClass::MaxWeight | FieldClass::Weight => (0, params.max_weight()),
        FieldClass::Dist | FieldClass::Counter => (0, 2 * n.max(old)),
        FieldClass::NameNumber => (1, n.max(old).max(2)),
        FieldClass::Flag => (0, 2),
        FieldClass::Bit => (0, 1),
    };
    let (lo, hi) = range;
    if hi <= lo && old == lo {
        return None;
    }
    loop {
        let v = rng.gen_range(lo..=hi);
        if v != old {
            return Some(v);
        }
    }
}

/// One tampered field the verifier did not catch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Undetected {
    pub node: NodeId,
    pub field: String,
    pub old: u64,
    pub new: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FieldReplaceReport {
    pub trials: usize,
    pub detected: usize,
    pub undetected: Vec<Undetected>,
}

impl FieldReplaceReport {
    pub fn rate(&self) -> f64 {
        if self.trials == 0 {
            1.0
        } else {
            self.detected as f64 / self.trials as f64
        }
    }

    pub fn merge(&mut self, other: FieldReplaceReport) {
        self.trials += other.trials;
        self.detected += other.detected;
        self.undetected.extend(other.undetected);
    }
}

/// Replaces every field of every node selected by `keep`, one at a time, with a
/// different random value and runs the verifier on each tampered assignment.
pub fn field_replace<S: Scheme>(
    g: &WeightedGraph,
    labels: &LabelAssignment<S::Cert>,
    keep: impl Fn(FieldClass) -> bool,
    seed: u64,
) -> FieldReplaceReport {
    let params = EncodingParams::for_graph(g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = FieldReplaceReport::default();
    for (node, cert) in labels.iter() {
        for spec in cert.fields().into_iter().filter(|s| keep(s.class)) {
            let old = cert.field(&spec.name).expect("listed fields exist");
            let Some(new) = replacement_value(spec.class, old, g, &params, &mut rng) else {
                continue;
            };
            let Ok(tampered) = labels.tamper(node, &spec.name, new) else {
                continue;
            };
            report.trials += 1;
            if S::run(g, &tampered).accepted {
                report.undetected.push(Undetected { node, field: spec.name, old, new });
            } else {
                report.detected += 1;
            }
        }
    }
    report
}

/// Outcome of re-proving one mutated instance.
#[derive(Clone, Debug, PartialEq)]
pub enum MutationOutcome {
    Detected,
    Undetected(WeightedGraph),
    Inapplicable(MutateError),
    /// The best-effort prover refused the mutated instance.
    ProverRefused(ProveError),
}

/// Mutates `g`, labels the result with the best-effort prover and runs the verifier.
pub fn mutation_trial<S: Scheme>(g: &WeightedGraph, kind: MutationKind, seed: u64) -> MutationOutcome {
    let mutated = match mutate_instance(g, kind, seed) {
        Ok(m) => m,
        Err(e) => return MutationOutcome::Inapplicable(e),
    };
    match S::prove(&mutated, ProveMode::BestEffort) {
        Err(e) => MutationOutcome::ProverRefused(e),
        Ok(labels) if S::run(&mutated, &labels).accepted => MutationOutcome::Undetected(mutated),
        Ok(_) => MutationOutcome::Detected,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;
    use crate::mst::is_mst;

    fn triangle() -> WeightedGraph {
        parse_graph("3 3\n1 2 1 1\n2 3 2 1\n1 3 3 0").unwrap()
    }

    #[test]
    fn swap_on_triangle() {
        let m = mutate_instance(&triangle(), MutationKind::SwapToHeavier, 0).unwrap();
        assert_eq!(m.selected_edges(), EdgeSet::from([(1, 2), (1, 3)]));
    }

    #[test]
    fn swap_on_tree_is_inapplicable() {
        let g = parse_graph("3 2\n1 2 1 1\n2 3 2 1").unwrap();
        assert!(matches!(
            mutate_instance(&g, MutationKind::SwapToHeavier, 0),
            Err(MutateError::Inapplicable { kind: MutationKind::SwapToHeavier, .. })
        ));
    }

    #[test]
    fn deselect_on_path() {
        let g = parse_graph("3 2\n1 2 1 1\n2 3 2 1").unwrap();
        let m = mutate_instance(&g, MutationKind::DeselectEdge, 5).unwrap();
        assert_eq!(m.selected_edges().len(), 1);
        assert!(!is_spanning_tree(&m, &m.selected_edges()));
    }

    #[test]
    fn every_kind_breaks_minimality() {
        for kind in MutationKind::ALL {
            for seed in 0..20 {
                let m = mutate_instance(&triangle(), kind, seed).unwrap();
                assert!(!is_mst(&m, &m.selected_edges()), "{kind} {seed}");
            }
        }
    }

    #[test]
    fn equal_weights_leave_nothing_to_swap() {
        let g = parse_graph("3 3\n1 2 1 1\n2 3 1 1\n1 3 1 0").unwrap();
        assert!(mutate_instance(&g, MutationKind::SwapToHeavier, 0).is_err());
        assert!(mutate_instance(&g, MutationKind::ReweightTreeEdgeUp, 0).is_ok());
    }

    #[test]
    fn replacement_values_differ() {
        let g = triangle();
        let p = EncodingParams::for_graph(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for class in [
            FieldClass::RootId,
            FieldClass::Dist,
            FieldClass::MaxWeight,
            FieldClass::Flag,
            FieldClass::NameNumber,
            FieldClass::Bit,
        ] {
            for old in 0..3 {
                let v = replacement_value(class, old, &g, &p, &mut rng).unwrap();
                assert_ne!(v, old);
            }
        }
        assert_eq!(replacement_value(FieldClass::Flag, 1, &g, &p, &mut rng).map(|v| v <= 2), Some(true));
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in MutationKind::ALL {
            assert_eq!(kind.as_str().parse::<MutationKind>(), Ok(kind));
        }
        assert!("nope".parse::<MutationKind>().is_err());
    }
}
