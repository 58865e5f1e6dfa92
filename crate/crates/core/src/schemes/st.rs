//! Spanning-tree certification: root identifier plus hop distance to the root.

use crate::bits::{BitReader, BitString, CodecError};
use crate::cert::{
    Certificate, EncodingParams, FieldClass, FieldSpec, LabelAssignment, LocalView, ProveError, ProveMode, Reason,
    Scheme, SchemeTag, StFault, TamperError, Verdict,
};
use crate::graph::{NodeId, WeightedGraph};
use crate::mst::is_spanning_tree;
use crate::tree::bfs_forest;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StCert {
    pub root: NodeId,
    pub dist: u32,
}

impl StCert {
    pub(crate) fn write(&self, out: &mut BitString, params: &EncodingParams) {
        out.push_uint(u64::from(self.root), params.idbits);
        out.push_gamma(u64::from(self.dist) + 1).unwrap();
    }

    pub(crate) fn read(r: &mut BitReader<'_>, params: &EncodingParams) -> Result<Self, CodecError> {
        let root = read_id(r, params)?;
        let dist = read_counter(r)?;
        Ok(StCert { root, dist })
    }

    pub(crate) fn len(&self, params: &EncodingParams) -> usize {
        params.idbits as usize + crate::bits::gamma_len(u64::from(self.dist) + 1)
    }

    pub(crate) fn field_specs() -> [FieldSpec; 2] {
        [FieldSpec::new("root", FieldClass::RootId), FieldSpec::new("dist", FieldClass::Dist)]
    }

    pub(crate) fn get(&self, name: &str) -> Option<u64> {
        match name {
            "root" => Some(u64::from(self.root)),
            "dist" => Some(u64::from(self.dist)),
            _ => None,
        }
    }

    /// Returns `Ok(false)` when `name` is not one of this certificate's fields.
    pub(crate) fn set(&mut self, name: &str, value: u64) -> Result<bool, TamperError> {
        let narrow = |v: u64| u32::try_from(v).map_err(|_| TamperError::BadValue { field: name.into(), value });
        match name {
            "root" => self.root = narrow(value)?,
            "dist" => self.dist = narrow(value)?,
            _ => return Ok(false),
        }
        Ok(true)
    }
}

pub(crate) fn read_id(r: &mut BitReader<'_>, params: &EncodingParams) -> Result<NodeId, CodecError> {
    NodeId::try_from(r.read_uint(params.idbits)?).map_err(|_| CodecError::InvalidValue("node id"))
}

/// Reads a counter stored as `gamma(value + 1)`.
pub(crate) fn read_counter(r: &mut BitReader<'_>) -> Result<u32, CodecError> {
    u32::try_from(r.read_gamma()? - 1).map_err(|_| CodecError::InvalidValue("counter"))
}

impl Certificate for StCert {
    fn encode_into(&self, out: &mut BitString, params: &EncodingParams) {
        self.write(out, params);
    }

    fn decode_from(r: &mut BitReader<'_>, params: &EncodingParams) -> Result<Self, CodecError> {
        StCert::read(r, params)
    }

    fn encoded_len(&self, params: &EncodingParams) -> usize {
        self.len(params)
    }

    fn fields(&self) -> Vec<FieldSpec> {
        StCert::field_specs().to_vec()
    }

    fn field(&self, name: &str) -> Option<u64> {
        self.get(name)
    }

    fn set_field(&mut self, name: &str, value: u64) -> Result<(), TamperError> {
        match self.set(name, value)? {
            true => Ok(()),
            false => Err(TamperError::UnknownField(name.into())),
        }
    }
}

/// Parent and children of a node, as positions in its view's incident list.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct TreeLinks {
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

/// The local spanning-tree checks. Faults are appended to `faults`; links are resolved
/// as far as the labels allow.
pub(crate) fn check_tree<C>(
    view: &LocalView<'_, C>,
    st: impl Fn(&C) -> &StCert,
    faults: &mut Vec<StFault>,
) -> TreeLinks {
    let own = st(view.cert);
    let mut fault = |f: StFault| {
        if !faults.contains(&f) {
            faults.push(f);
        }
    };
    if view.incident.iter().any(|i| st(i.cert).root != own.root) {
        fault(StFault::RootMismatch);
    }
    if (own.dist == 0) != (view.id == own.root) {
        fault(StFault::RootMismatch);
    }
    let mut links = TreeLinks::default();
    let mut parents = 0;
    for (k, inc) in view.incident.iter().enumerate().filter(|(_, i)| i.selected) {
        let d = st(inc.cert).dist;
        if own.dist > 0 && d == own.dist - 1 {
            parents += 1;
            links.parent = Some(k);
        } else if Some(d) == own.dist.checked_add(1) {
            links.children.push(k);
        } else {
            fault(StFault::StraySelected);
        }
    }
    if own.dist > 0 {
        match parents {
            0 => fault(StFault::DistGap),
            1 => {}
            _ => {
                fault(StFault::ParentCount);
                links.parent = None;
            }
        }
    }
    links
}

/// Labels every node with the root id and its depth. Strict mode requires a spanning tree;
/// best-effort mode roots each selected component at `root` or at its smallest id.
pub fn st_prove(g: &WeightedGraph, root: NodeId, mode: ProveMode) -> Result<LabelAssignment<StCert>, ProveError> {
    let r = g.index_of(root).ok_or(crate::tree::TreeError::UnknownNode(root))?;
    let edges = g.selected_edges();
    if mode == ProveMode::Strict && !is_spanning_tree(g, &edges) {
        return Err(ProveError::NotSpanningTree);
    }
    let forest = bfs_forest(g, &edges, &[r]);
    Ok((0..g.node_count())
        .map(|x| (g.id(x), StCert { root: g.id(forest.component_root[x]), dist: forest.depth[x] }))
        .collect())
}

pub fn st_verify(view: &LocalView<'_, StCert>) -> Verdict {
    let mut faults = Vec::new();
    check_tree(view, |c| c, &mut faults);
    let mut verdict = Verdict::accept();
    for f in faults {
        verdict.reject(f.plain());
    }
    verdict
}

/// Spanning-tree scheme, rooted at the smallest id.
pub struct StScheme;

impl Scheme for StScheme {
    type Cert = StCert;
    const TAG: SchemeTag = SchemeTag::St;

    fn prove(g: &WeightedGraph, mode: ProveMode) -> Result<LabelAssignment<StCert>, ProveError> {
        let root = *g.ids().first().ok_or(ProveError::NotSpanningTree)?;
        st_prove(g, root, mode)
    }

    fn verify(view: &LocalView<'_, StCert>) -> Verdict {
        st_verify(view)
    }
}

/// Maps spanning-tree faults into a composite scheme's verdict.
pub(crate) fn reject_st(verdict: &mut Verdict, faults: &[StFault]) {
    for &f in faults {
        verdict.reject(Reason::St(f));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    fn path(n: u32) -> WeightedGraph {
        let text: String = std::iter::once(format!("{n} {}\n", n - 1))
            .chain((1..n).map(|i| format!("{} {} {} 1\n", i, i + 1, i)))
            .collect();
        parse_graph(&text).unwrap()
    }

    fn dists(l: &LabelAssignment<StCert>) -> Vec<(NodeId, u32)> {
        l.iter().map(|(id, c)| (id, c.dist)).collect()
    }

    #[test]
    fn prove_examples() {
        let l = st_prove(&path(3), 1, ProveMode::Strict).unwrap();
        assert_eq!(
            l.iter().map(|(_, c)| *c).collect::<Vec<_>>(),
            vec![StCert { root: 1, dist: 0 }, StCert { root: 1, dist: 1 }, StCert { root: 1, dist: 2 }]
        );
        let l = st_prove(&parse_graph("1 0").unwrap(), 1, ProveMode::Strict).unwrap();
        assert_eq!(l.get(1), Some(&StCert { root: 1, dist: 0 }));
        let l = st_prove(&path(7), 4, ProveMode::Strict).unwrap();
        assert_eq!(dists(&l).into_iter().map(|(_, d)| d).collect::<Vec<_>>(), vec![3, 2, 1, 0, 1, 2, 3]);
    }

    #[test]
    fn strict_prove_refuses_non_trees() {
        let g = parse_graph("3 3\n1 2 1 1\n2 3 1 1\n1 3 1 1").unwrap();
        assert_eq!(st_prove(&g, 1, ProveMode::Strict), Err(ProveError::NotSpanningTree));
        assert!(st_prove(&g, 1, ProveMode::BestEffort).is_ok());
    }

    #[test]
    fn size_matches_encoding() {
        let c = StCert { root: 200, dist: 1 };
        let p = EncodingParams { idbits: 8, wbits: 4 };
        assert_eq!(c.encoded_len(&p), 11);
        assert_eq!(c.encode(&p).len(), 11);
        assert_eq!(StCert::decode(&c.encode(&p), &p), Ok(c));
    }

    #[test]
    fn honest_labels_accepted() {
        let g = path(7);
        for root in 1..=7 {
            let l = st_prove(&g, root, ProveMode::Strict).unwrap();
            assert!(StScheme::run(&g, &l).accepted);
        }
    }

    #[test]
    fn dist_tamper_detected() {
        let g = path(7);
        let l = st_prove(&g, 4, ProveMode::Strict).unwrap();
        for id in 1..=7 {
            let d = l.get(id).unwrap().dist;
            let t = l.tamper(id, "dist", u64::from(d) + 1).unwrap();
            let report = StScheme::run(&g, &t);
            assert!(!report.accepted);
            // only the tampered node and its tree neighbors can notice
            assert!(report.rejecting().all(|(x, _)| x.abs_diff(id) <= 1));
        }
    }

    #[test]
    fn disconnected_selection_rejected() {
        let g = parse_graph("3 2\n1 2 1 1\n2 3 1 0").unwrap();
        let l = StScheme::prove(&g, ProveMode::BestEffort).unwrap();
        let report = StScheme::run(&g, &l);
        assert!(!report.accepted);
        assert!(report.has_reason(Reason::RootMismatch));
    }
}
