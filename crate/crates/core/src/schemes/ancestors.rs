//! Ancestors as anchors: each node lists `(ancestor id, path max to it)` from itself up to
//! the root. Two neighbors find their nearest common ancestor as the first id on both lists.

use std::collections::HashMap;

use crate::bits::{gamma_len, BitReader, BitString, CodecError};
use crate::cert::{
    Certificate, EncodingParams, FieldClass, FieldSpec, LabelAssignment, LocalView, ProveError, ProveMode, Reason,
    Scheme, SchemeTag, TamperError, Verdict,
};
use crate::graph::{NodeId, Weight, WeightedGraph};
use crate::mst::is_mst;
use crate::schemes::st::{check_tree, read_id, reject_st, StCert};
use crate::schemes::{indexed, read_weight};
use crate::tree::bfs_forest;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Anchor {
    pub id: NodeId,
    pub m: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AncestorsCert {
    pub st: StCert,
    /// From the node itself (`m = 0`) up to the root.
    pub anchors: Vec<Anchor>,
}

impl Certificate for AncestorsCert {
    fn encode_into(&self, out: &mut BitString, params: &EncodingParams) {
        self.st.write(out, params);
        out.push_gamma(self.anchors.len() as u64 + 1).unwrap();
        for a in &self.anchors {
            out.push_uint(u64::from(a.id), params.idbits);
            out.push_uint(a.m, params.wbits);
        }
    }

    fn decode_from(r: &mut BitReader<'_>, params: &EncodingParams) -> Result<Self, CodecError> {
        let st = StCert::read(r, params)?;
        let len = r.read_gamma()? - 1;
        if len as u128 * (params.idbits + params.wbits) as u128 > r.remaining() as u128 {
            return Err(CodecError::Truncated);
        }
        let anchors = (0..len)
            .map(|_| Ok(Anchor { id: read_id(r, params)?, m: read_weight(r, params)? }))
            .collect::<Result<Vec<_>, CodecError>>()?;
        Ok(AncestorsCert { st, anchors })
    }

    fn encoded_len(&self, params: &EncodingParams) -> usize {
        self.st.len(params)
            + gamma_len(self.anchors.len() as u64 + 1)
            + self.anchors.len() * (params.idbits + params.wbits) as usize
    }

    fn fields(&self) -> Vec<FieldSpec> {
        let mut out = StCert::field_specs().to_vec();
        for i in 0..self.anchors.len() {
            out.push(FieldSpec::new(format!("anc[{i}].id"), FieldClass::Id));
            out.push(FieldSpec::new(format!("anc[{i}].m"), FieldClass::MaxWeight));
        }
        out
    }

    fn field(&self, name: &str) -> Option<u64> {
        if let Some(v) = self.st.get(name) {
            return Some(v);
        }
        let (i, attr) = indexed(name, "anc")?;
        let a = self.anchors.get(i)?;
        match attr {
            ".id" => Some(u64::from(a.id)),
            ".m" => Some(a.m),
            _ => None,
        }
    }

    fn set_field(&mut self, name: &str, value: u64) -> Result<(), TamperError> {
        if self.field(name).is_none() {
            return Err(TamperError::UnknownField(name.into()));
        }
        if self.st.set(name, value)? {
            return Ok(());
        }
        let (i, attr) = indexed(name, "anc").unwrap();
        let a = &mut self.anchors[i];
        match attr {
            ".id" => a.id = NodeId::try_from(value).map_err(|_| TamperError::BadValue { field: name.into(), value })?,
            _ => a.m = value,
        }
        Ok(())
    }
}

/// Labels with the input tree rooted at `root`. In best-effort mode a non-spanning
/// selection is labelled per breadth-first component.
pub fn ancestors_prove(
    g: &WeightedGraph,
    root: NodeId,
    mode: ProveMode,
) -> Result<LabelAssignment<AncestorsCert>, ProveError> {
    let r = g.index_of(root).ok_or(crate::tree::TreeError::UnknownNode(root))?;
    let edges = g.selected_edges();
    if mode == ProveMode::Strict && !is_mst(g, &edges) {
        return Err(ProveError::NotMinimal);
    }
    let forest = bfs_forest(g, &edges, &[r]);
    let mut lists: Vec<Vec<Anchor>> = vec![Vec::new(); g.node_count()];
    for &x in &forest.order {
        let mut list = vec![Anchor { id: g.id(x), m: 0 }];
        if forest.depth[x] > 0 {
            let w = forest.parent_weight[x];
            list.extend(lists[forest.parent[x]].iter().map(|a| Anchor { id: a.id, m: a.m.max(w) }));
        }
        lists[x] = list;
    }
    Ok(lists
        .into_iter()
        .enumerate()
        .map(|(x, anchors)| {
            let st = StCert { root: g.id(forest.component_root[x]), dist: forest.depth[x] };
            (g.id(x), AncestorsCert { st, anchors })
        })
        .collect())
}

pub fn ancestors_verify(view: &LocalView<'_, AncestorsCert>) -> Verdict {
    let mut verdict = Verdict::accept();
    let mut faults = Vec::new();
    let links = check_tree(view, |c| &c.st, &mut faults);
    reject_st(&mut verdict, &faults);

    let own = &view.cert.anchors;
    match own.first() {
        None => {
            verdict.reject(Reason::ListShift);
            return verdict;
        }
        Some(a) => {
            verdict.require(a.id == view.id, Reason::ListShift);
            verdict.require(a.m == 0, Reason::MaxChain);
        }
    }
    if view.cert.st.dist == 0 {
        verdict.require(own.len() == 1, Reason::ListShift);
    }
    if let Some(k) = links.parent {
        let p = &view.incident[k];
        let theirs = &p.cert.anchors;
        verdict.require(theirs.len() + 1 == own.len(), Reason::ListShift);
        for (mine, up) in own[1..].iter().zip(theirs) {
            verdict.require(mine.id == up.id, Reason::ListShift);
            verdict.require(mine.m == up.m.max(p.weight), Reason::MaxChain);
        }
    }

    for inc in view.unselected() {
        let theirs: HashMap<NodeId, Weight> = inc.cert.anchors.iter().map(|a| (a.id, a.m)).collect();
        match own.iter().find_map(|a| theirs.get(&a.id).map(|&m| a.m.max(m))) {
            None => verdict.reject(Reason::NoCommonAnchor),
            Some(max) => verdict.require(inc.weight >= max, Reason::CycleProperty),
        }
    }
    verdict
}

/// Ancestors scheme, input tree rooted at the smallest id.
pub struct AncestorsScheme;

impl Scheme for AncestorsScheme {
    type Cert = AncestorsCert;
    const TAG: SchemeTag = SchemeTag::Ancestors;

    fn prove(g: &WeightedGraph, mode: ProveMode) -> Result<LabelAssignment<AncestorsCert>, ProveError> {
        let root = *g.ids().first().ok_or(ProveError::NotSpanningTree)?;
        ancestors_prove(g, root, mode)
    }

    fn verify(view: &LocalView<'_, AncestorsCert>) -> Verdict {
        ancestors_verify(view)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    fn anchors(l: &LabelAssignment<AncestorsCert>, id: NodeId) -> Vec<(NodeId, Weight)> {
        l.get(id).unwrap().anchors.iter().map(|a| (a.id, a.m)).collect()
    }

    #[test]
    fn path_lists() {
        let g = parse_graph("3 2\n1 2 1 1\n2 3 2 1").unwrap();
        let l = ancestors_prove(&g, 1, ProveMode::Strict).unwrap();
        assert_eq!(anchors(&l, 1), vec![(1, 0)]);
        assert_eq!(anchors(&l, 3), vec![(3, 0), (2, 2), (1, 2)]);
        assert!(AncestorsScheme::run(&g, &l).accepted);
    }

    #[test]
    fn heavier_tree_rejected_by_cycle_property() {
        let g = parse_graph("3 3\n1 2 1 1\n2 3 2 0\n1 3 3 1").unwrap();
        let l = AncestorsScheme::prove(&g, ProveMode::BestEffort).unwrap();
        let report = AncestorsScheme::run(&g, &l);
        let rejecting: Vec<_> = report.rejecting().map(|(id, v)| (id, v.reasons().to_vec())).collect();
        assert_eq!(rejecting, vec![(2, vec![Reason::CycleProperty]), (3, vec![Reason::CycleProperty])]);
    }

    #[test]
    fn tampered_m_rejected_by_owner() {
        let g = parse_graph("4 4\n1 2 1 1\n2 3 2 1\n3 4 3 1\n1 4 5 0").unwrap();
        let l = AncestorsScheme::prove(&g, ProveMode::Strict).unwrap();
        for id in 1..=4u32 {
            for i in 0..l.get(id).unwrap().anchors.len() {
                let field = format!("anc[{i}].m");
                let old = l.get(id).unwrap().field(&field).unwrap();
                let report = AncestorsScheme::run(&g, &l.tamper(id, &field, old + 1).unwrap());
                assert!(report.verdicts[&id].reasons().contains(&Reason::MaxChain), "{id} {field}");
            }
        }
    }

    #[test]
    fn encoding_round_trip_and_len() {
        let g = parse_graph("4 4\n1 2 1 1\n2 3 2 1\n3 4 3 1\n1 4 5 0").unwrap();
        let p = EncodingParams::for_graph(&g);
        for (_, c) in AncestorsScheme::prove(&g, ProveMode::Strict).unwrap().iter() {
            let bits = c.encode(&p);
            assert_eq!(bits.len(), c.encoded_len(&p));
            assert_eq!(&AncestorsCert::decode(&bits, &p).unwrap(), c);
        }
    }
}
