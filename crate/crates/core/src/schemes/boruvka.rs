//! Certification of a Borůvka run: per phase, the fragment root, the hop distance to it
//! inside the fragment, and the minimum-weight outgoing edge the fragment chose.
//!
//! Outgoing edges are compared by `(w, unselected, min id, max id)`. Preferring selected
//! edges among equal weights makes any MST the unique minimum under this order, so every
//! MST admits an honest run even when weights repeat.

use std::collections::VecDeque;

use crate::bits::{gamma_len, BitReader, BitString, CodecError};
use crate::cert::{
    Certificate, EncodingParams, FieldClass, FieldSpec, LabelAssignment, LocalView, ProveError, ProveMode, Reason,
    Scheme, SchemeTag, TamperError, Verdict,
};
use crate::graph::{Edge, NodeId, Weight, WeightedGraph};
use crate::mst::{is_mst, Dsu};
use crate::schemes::st::{read_counter, read_id};
use crate::schemes::{indexed, ListedEdge};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Phase {
    pub root: NodeId,
    pub dist: u32,
    pub mwoe: Option<ListedEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoruvkaCert {
    pub phases: Vec<Phase>,
}

/// Comparison key for outgoing edges.
type OutKey = (Weight, bool, NodeId, NodeId);

fn out_key(lo: NodeId, hi: NodeId, w: Weight, selected: bool) -> OutKey {
    (w, !selected, lo, hi)
}

fn edge_key(e: &Edge) -> OutKey {
    out_key(e.u, e.v, e.w, e.selected)
}

/// Key of a recorded MWOE, which is claimed to be selected.
fn mwoe_key(m: &ListedEdge) -> OutKey {
    out_key(m.lo, m.hi, m.w, true)
}

impl Certificate for BoruvkaCert {
    fn encode_into(&self, out: &mut BitString, params: &EncodingParams) {
        out.push_gamma(self.phases.len() as u64 + 1).unwrap();
        for p in &self.phases {
            out.push_uint(u64::from(p.root), params.idbits);
            out.push_gamma(u64::from(p.dist) + 1).unwrap();
            out.push(p.mwoe.is_some());
            if let Some(m) = &p.mwoe {
                m.write(out, params);
            }
        }
    }

    fn decode_from(r: &mut BitReader<'_>, params: &EncodingParams) -> Result<Self, CodecError> {
        let count = r.read_gamma()? - 1;
        if count > r.remaining() as u64 {
            return Err(CodecError::Truncated);
        }
        let mut phases = Vec::with_capacity(count as usize);
        for _ in 0..count {
            let root = read_id(r, params)?;
            let dist = read_counter(r)?;
            let mwoe = if r.read_bit()? { Some(ListedEdge::read(r, params)?) } else { None };
            phases.push(Phase { root, dist, mwoe });
        }
        Ok(BoruvkaCert { phases })
    }

    fn encoded_len(&self, params: &EncodingParams) -> usize {
        gamma_len(self.phases.len() as u64 + 1)
            + self
                .phases
                .iter()
                .map(|p| {
                    params.idbits as usize
                        + gamma_len(u64::from(p.dist) + 1)
                        + 1
                        + if p.mwoe.is_some() { ListedEdge::bits(params) } else { 0 }
                })
                .sum::<usize>()
    }

    fn fields(&self) -> Vec<FieldSpec> {
        let mut out = Vec::new();
        for (f, p) in self.phases.iter().enumerate() {
            out.push(FieldSpec::new(format!("phase[{f}].root"), FieldClass::Id));
            out.push(FieldSpec::new(format!("phase[{f}].dist"), FieldClass::Counter));
            if p.mwoe.is_some() {
                out.push(FieldSpec::new(format!("phase[{f}].mwoe.lo"), FieldClass::Id));
                out.push(FieldSpec::new(format!("phase[{f}].mwoe.hi"), FieldClass::Id));
                out.push(FieldSpec::new(format!("phase[{f}].mwoe.w"), FieldClass::Weight));
            }
        }
        out
    }

    fn field(&self, name: &str) -> Option<u64> {
        let (f, attr) = indexed(name, "phase")?;
        let p = self.phases.get(f)?;
        match attr {
            ".root" => Some(u64::from(p.root)),
            ".dist" => Some(u64::from(p.dist)),
            _ => p.mwoe.as_ref()?.get(attr.strip_prefix(".mwoe.")?),
        }
    }

    fn set_field(&mut self, name: &str, value: u64) -> Result<(), TamperError> {
        if self.field(name).is_none() {
            return Err(TamperError::UnknownField(name.into()));
        }
        let bad = || TamperError::BadValue { field: name.into(), value };
        let (f, attr) = indexed(name, "phase").unwrap();
        let p = &mut self.phases[f];
        match attr {
            ".root" => p.root = NodeId::try_from(value).map_err(|_| bad())?,
            ".dist" => p.dist = u32::try_from(value).map_err(|_| bad())?,
            _ => p.mwoe.as_mut().unwrap().set(&attr[6..], value).ok_or_else(bad)?,
        }
        Ok(())
    }
}

/// Simulates Borůvka over the selected edges: all fragments choose simultaneously,
/// merged fragments are named by their smallest id, and the last phase (a single
/// fragment) records no MWOE.
pub fn boruvka_prove(g: &WeightedGraph, mode: ProveMode) -> Result<LabelAssignment<BoruvkaCert>, ProveError> {
    let strict = mode == ProveMode::Strict;
    if strict {
        if !g.is_connected() {
            return Err(ProveError::Disconnected);
        }
        if !is_mst(g, &g.selected_edges()) {
            return Err(ProveError::NotMinimal);
        }
    }
    let n = g.node_count();
    let mut dsu = Dsu::new(n);
    let mut certs: Vec<Vec<Phase>> = vec![Vec::new(); n];
    loop {
        // node indices follow id order, so the smallest index is the smallest id
        let mut root = vec![usize::MAX; n];
        for x in 0..n {
            let r = dsu.find(x);
            root[r] = root[r].min(x);
        }
        let frag_root: Vec<usize> = (0..n).map(|x| root[dsu.find(x)]).collect();
        let fragments = (0..n).filter(|&x| frag_root[x] == x).count();
        let dist = fragment_distances(g, &frag_root);

        let mut best: Vec<Option<&Edge>> = vec![None; n];
        let mut best_any: Vec<Option<&Edge>> = vec![None; n];
        if fragments > 1 {
            for e in g.edges() {
                let (a, b) = (g.index_of(e.u).unwrap(), g.index_of(e.v).unwrap());
                if frag_root[a] == frag_root[b] {
                    continue;
                }
                for f in [frag_root[a], frag_root[b]] {
                    if best_any[f].is_none_or(|c| edge_key(e) < edge_key(c)) {
                        best_any[f] = Some(e);
                    }
                    if e.selected && best[f].is_none_or(|c| edge_key(e) < edge_key(c)) {
                        best[f] = Some(e);
                    }
                }
            }
        }
        if strict && best != best_any {
            return Err(ProveError::Internal("minimum outgoing edge is not selected".into()));
        }
        for x in 0..n {
            let mwoe = best[frag_root[x]].map(|e| ListedEdge::new(e.u, e.v, e.w));
            certs[x].push(Phase { root: g.id(frag_root[x]), dist: dist[x], mwoe });
        }
        if fragments <= 1 || best.iter().all(Option::is_none) {
            break;
        }
        for e in best.iter().flatten() {
            dsu.union(g.index_of(e.u).unwrap(), g.index_of(e.v).unwrap());
        }
    }
    Ok(certs.into_iter().enumerate().map(|(x, phases)| (g.id(x), BoruvkaCert { phases })).collect())
}

/// Hop distance from each node to its fragment root over selected edges inside the fragment.
fn fragment_distances(g: &WeightedGraph, frag_root: &[usize]) -> Vec<u32> {
    let n = g.node_count();
    let mut dist = vec![u32::MAX; n];
    let mut queue = VecDeque::new();
    for x in (0..n).filter(|&x| frag_root[x] == x) {
        dist[x] = 0;
        queue.push_back(x);
    }
    while let Some(x) = queue.pop_front() {
        for (y, e) in g.incident(x) {
            if e.selected && frag_root[y] == frag_root[x] && dist[y] == u32::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    // unreachable only when a fragment is not connected through selected edges
    dist.iter().map(|&d| if d == u32::MAX { 0 } else { d }).collect()
}

pub fn boruvka_verify(view: &LocalView<'_, BoruvkaCert>) -> Verdict {
    let mut verdict = Verdict::accept();
    let own = &view.cert.phases;
    let count = own.len();
    if count == 0 {
        verdict.reject(Reason::FragTree);
        return verdict;
    }
    if view.incident.iter().any(|i| i.cert.phases.len() != count) {
        verdict.reject(Reason::MergeInconsistent);
        return verdict;
    }
    verdict.require(own[0].root == view.id && own[0].dist == 0, Reason::FragTree);

    for f in 0..count {
        let me = &own[f];
        let last = f + 1 == count;
        let same = |i: &&crate::cert::Incident<'_, BoruvkaCert>| i.cert.phases[f].root == me.root;

        verdict.require((me.dist == 0) == (me.root == view.id), Reason::FragTree);
        let mut parents = 0;
        for inc in view.selected().filter(same) {
            let d = inc.cert.phases[f].dist;
            if me.dist > 0 && d == me.dist - 1 {
                parents += 1;
            } else if Some(d) != me.dist.checked_add(1) {
                verdict.reject(Reason::FragTree);
            }
            verdict.require(inc.cert.phases[f].mwoe == me.mwoe, Reason::MwoeMismatch);
            if !last {
                verdict.require(inc.cert.phases[f + 1].root == own[f + 1].root, Reason::MergeInconsistent);
            }
        }
        verdict.require(me.dist == 0 || parents == 1, Reason::FragTree);

        if last {
            verdict.require(me.mwoe.is_none(), Reason::MwoeMismatch);
            verdict.require(view.incident.iter().all(|i| same(&i)), Reason::NotSingleFragment);
            continue;
        }
        let Some(m) = me.mwoe else {
            verdict.reject(Reason::MwoeAbsent);
            continue;
        };
        for inc in view.incident.iter().filter(|i| !same(i)) {
            let key = out_key(view.id.min(inc.neighbor), view.id.max(inc.neighbor), inc.weight, inc.selected);
            verdict.require(key >= mwoe_key(&m), Reason::LighterOutgoing);
        }
        if m.touches(view.id) {
            let other = if m.lo == view.id { m.hi } else { m.lo };
            match view.neighbor(other) {
                Some(inc) if inc.selected && inc.weight == m.w => {
                    let theirs = &inc.cert.phases;
                    verdict.require(theirs[f].root != me.root, Reason::MergeInconsistent);
                    verdict.require(theirs[f + 1].root == own[f + 1].root, Reason::MergeInconsistent);
                }
                _ => verdict.reject(Reason::MwoeAbsent),
            }
        }
    }

    for inc in view.selected() {
        let e = ListedEdge::new(view.id, inc.neighbor, inc.weight);
        let chosen = (0..count).any(|f| own[f].mwoe == Some(e) || inc.cert.phases[f].mwoe == Some(e));
        verdict.require(chosen, Reason::EdgeNeverChosen);
    }
    verdict
}

pub struct BoruvkaScheme;

impl Scheme for BoruvkaScheme {
    type Cert = BoruvkaCert;
    const TAG: SchemeTag = SchemeTag::Boruvka;

    fn prove(g: &WeightedGraph, mode: ProveMode) -> Result<LabelAssignment<BoruvkaCert>, ProveError> {
        boruvka_prove(g, mode)
    }

    fn verify(view: &LocalView<'_, BoruvkaCert>) -> Verdict {
        boruvka_verify(view)
    }
}
