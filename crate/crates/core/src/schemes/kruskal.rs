//! Kruskal-list certification: every node holds the sorted list of selected edges.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::bits::{gamma_len, BitReader, BitString, CodecError};
use crate::cert::{
    Certificate, EncodingParams, FieldClass, FieldSpec, LabelAssignment, LocalView, ProveError, ProveMode, Reason,
    Scheme, SchemeTag, TamperError, Verdict,
};
use crate::graph::{NodeId, Weight, WeightedGraph};
use crate::mst::{is_mst, Dsu};
use crate::schemes::{indexed, ListedEdge};

#[derive(Clone, Debug)]
pub struct KruskalCert(pub Arc<Vec<ListedEdge>>);

impl PartialEq for KruskalCert {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Certificate for KruskalCert {
    fn encode_into(&self, out: &mut BitString, params: &EncodingParams) {
        out.push_gamma(self.0.len() as u64 + 1).unwrap();
        for e in self.0.iter() {
            e.write(out, params);
        }
    }

    fn decode_from(r: &mut BitReader<'_>, params: &EncodingParams) -> Result<Self, CodecError> {
        let k = r.read_gamma()? - 1;
        if k as u128 * ListedEdge::bits(params) as u128 > r.remaining() as u128 {
            return Err(CodecError::Truncated);
        }
        let list = (0..k).map(|_| ListedEdge::read(r, params)).collect::<Result<Vec<_>, _>>()?;
        Ok(KruskalCert(Arc::new(list)))
    }

    fn encoded_len(&self, params: &EncodingParams) -> usize {
        gamma_len(self.0.len() as u64 + 1) + self.0.len() * ListedEdge::bits(params)
    }

    fn fields(&self) -> Vec<FieldSpec> {
        (0..self.0.len())
            .flat_map(|i| {
                [
                    FieldSpec::new(format!("edge[{i}].lo"), FieldClass::Id),
                    FieldSpec::new(format!("edge[{i}].hi"), FieldClass::Id),
                    FieldSpec::new(format!("edge[{i}].w"), FieldClass::Weight),
                ]
            })
            .collect()
    }

    fn field(&self, name: &str) -> Option<u64> {
        let (i, attr) = indexed(name, "edge")?;
        self.0.get(i)?.get(attr.strip_prefix('.')?)
    }

    fn set_field(&mut self, name: &str, value: u64) -> Result<(), TamperError> {
        if self.field(name).is_none() {
            return Err(TamperError::UnknownField(name.into()));
        }
        let (i, attr) = indexed(name, "edge").unwrap();
        Arc::make_mut(&mut self.0)[i]
            .set(&attr[1..], value)
            .ok_or_else(|| TamperError::BadValue { field: name.into(), value })
    }
}

pub fn kruskal_prove(g: &WeightedGraph, mode: ProveMode) -> Result<LabelAssignment<KruskalCert>, ProveError> {
    if mode == ProveMode::Strict && !is_mst(g, &g.selected_edges()) {
        return Err(ProveError::NotMinimal);
    }
    let mut list: Vec<ListedEdge> =
        g.edges().iter().filter(|e| e.selected).map(|e| ListedEdge::new(e.u, e.v, e.w)).collect();
    list.sort_unstable_by_key(|e| e.key());
    let shared = Arc::new(list);
    Ok(g.ids().iter().map(|&id| (id, KruskalCert(Arc::clone(&shared)))).collect())
}

/// Checks that the list is strictly sorted and forms a single tree over the ids it mentions.
fn listed_tree(list: &[ListedEdge]) -> Option<HashMap<NodeId, Vec<(NodeId, Weight)>>> {
    if list.windows(2).any(|p| p[0].key() >= p[1].key()) || list.iter().any(|e| e.lo >= e.hi) {
        return None;
    }
    let mentioned: BTreeSet<NodeId> = list.iter().flat_map(|e| [e.lo, e.hi]).collect();
    if !list.is_empty() && mentioned.len() != list.len() + 1 {
        return None;
    }
    let index: HashMap<NodeId, usize> = mentioned.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let mut dsu = Dsu::new(mentioned.len());
    let mut adj: HashMap<NodeId, Vec<(NodeId, Weight)>> = HashMap::new();
    for e in list {
        if !dsu.union(index[&e.lo], index[&e.hi]) {
            return None;
        }
        adj.entry(e.lo).or_default().push((e.hi, e.w));
        adj.entry(e.hi).or_default().push((e.lo, e.w));
    }
    Some(adj)
}

/// Path maxima from `source` to every node of the listed tree.
fn maxima_from(adj: &HashMap<NodeId, Vec<(NodeId, Weight)>>, source: NodeId) -> HashMap<NodeId, Weight> {
    let mut best = HashMap::from([(source, 0)]);
    let mut stack = vec![source];
    while let Some(x) = stack.pop() {
        let here = best[&x];
        for &(y, w) in adj.get(&x).into_iter().flatten() {
            if let std::collections::hash_map::Entry::Vacant(e) = best.entry(y) {
                e.insert(here.max(w));
                stack.push(y);
            }
        }
    }
    best
}

pub fn kruskal_verify(view: &LocalView<'_, KruskalCert>) -> Verdict {
    let mut verdict = Verdict::accept();
    verdict.require(view.incident.iter().all(|i| i.cert == view.cert), Reason::ListMismatch);
    let list = &view.cert.0;
    let Some(adj) = listed_tree(list) else {
        verdict.reject(Reason::ListNotTree);
        return verdict;
    };

    let mut mine: Vec<ListedEdge> = list.iter().filter(|e| e.touches(view.id)).copied().collect();
    let mut seen: Vec<ListedEdge> = view.selected().map(|i| ListedEdge::new(view.id, i.neighbor, i.weight)).collect();
    mine.sort_unstable_by_key(|e| e.key());
    seen.sort_unstable_by_key(|e| e.key());
    verdict.require(mine == seen, Reason::IncidentMismatch);

    let maxima = maxima_from(&adj, view.id);
    for inc in view.unselected() {
        match maxima.get(&inc.neighbor) {
            Some(&m) if adj.contains_key(&view.id) => verdict.require(m <= inc.weight, Reason::LighterEdgeExists),
            _ => verdict.reject(Reason::IncidentMismatch),
        }
    }
    verdict
}

pub struct KruskalScheme;

impl Scheme for KruskalScheme {
    type Cert = KruskalCert;
    const TAG: SchemeTag = SchemeTag::Kruskal;

    fn prove(g: &WeightedGraph, mode: ProveMode) -> Result<LabelAssignment<KruskalCert>, ProveError> {
        kruskal_prove(g, mode)
    }

    fn verify(view: &LocalView<'_, KruskalCert>) -> Verdict {
        kruskal_verify(view)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    #[test]
    fn triangle_mst_accepted() {
        let g = parse_graph("3 3\n1 2 1 1\n2 3 2 1\n1 3 3 0").unwrap();
        let l = kruskal_prove(&g, ProveMode::Strict).unwrap();
        assert_eq!(*l.get(1).unwrap().0, vec![ListedEdge::new(1, 2, 1), ListedEdge::new(2, 3, 2)]);
        assert!(KruskalScheme::run(&g, &l).accepted);
    }

    #[test]
    fn heavier_tree_rejected_at_light_edge() {
        let g = parse_graph("3 3\n1 2 1 1\n2 3 2 0\n1 3 3 1").unwrap();
        let l = kruskal_prove(&g, ProveMode::BestEffort).unwrap();
        let report = KruskalScheme::run(&g, &l);
        let rejecting: Vec<_> = report.rejecting().map(|(id, v)| (id, v.reasons().to_vec())).collect();
        assert_eq!(rejecting, vec![(2, vec![Reason::LighterEdgeExists]), (3, vec![Reason::LighterEdgeExists])]);
    }

    #[test]
    fn single_node_empty_list() {
        let g = parse_graph("1 0").unwrap();
        let l = kruskal_prove(&g, ProveMode::Strict).unwrap();
        assert!(KruskalScheme::run(&g, &l).accepted);
    }

    #[test]
    fn unsorted_or_cyclic_lists_rejected() {
        let g = parse_graph("3 3\n1 2 1 1\n2 3 2 1\n1 3 3 0").unwrap();
        let swapped = KruskalCert(Arc::new(vec![ListedEdge::new(2, 3, 2), ListedEdge::new(1, 2, 1)]));
        let l: LabelAssignment<_> = g.ids().iter().map(|&id| (id, swapped.clone())).collect();
        assert!(KruskalScheme::run(&g, &l).verdicts.values().all(|v| v.reasons() == [Reason::ListNotTree]));

        let g = parse_graph("3 3\n1 2 1 1\n2 3 2 1\n1 3 3 1").unwrap();
        let l = kruskal_prove(&g, ProveMode::BestEffort).unwrap();
        assert!(KruskalScheme::run(&g, &l).verdicts.values().all(|v| v.reasons() == [Reason::ListNotTree]));
    }

    #[test]
    fn missing_selected_edge_is_incident_mismatch() {
        let g = parse_graph("3 2\n1 2 1 1\n2 3 2 0").unwrap();
        let l = kruskal_prove(&g, ProveMode::BestEffort).unwrap();
        let report = KruskalScheme::run(&g, &l);
        assert!(!report.accepted);
        assert!(report.has_reason(Reason::IncidentMismatch));
    }

    #[test]
    fn encoding_round_trip_and_len() {
        let g = parse_graph("3 3\n1 2 1 1\n2 3 2 1\n1 3 3 0").unwrap();
        let p = EncodingParams::for_graph(&g);
        let c = kruskal_prove(&g, ProveMode::Strict).unwrap().get(2).unwrap().clone();
        let bits = c.encode(&p);
        assert_eq!(bits.len(), c.encoded_len(&p));
        assert_eq!(bits.len(), 3 + 2 * (2 + 2 + 2));
        assert_eq!(KruskalCert::decode(&bits, &p).unwrap(), c);
    }
}
