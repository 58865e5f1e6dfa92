//! Universal certification: every node holds a full description of the configuration.

use std::sync::Arc;

use crate::bits::{gamma_len, BitReader, BitString, CodecError};
use crate::cert::{
    Certificate, EncodingParams, FieldClass, FieldSpec, LabelAssignment, LocalView, ProveError, ProveMode, Reason,
    Scheme, SchemeTag, TamperError, Verdict,
};
use crate::graph::{Edge, NodeId, Weight, WeightedGraph};
use crate::mst::is_mst;
use crate::schemes::{indexed, read_weight};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Cell {
    pub present: bool,
    pub w: Weight,
    pub selected: bool,
}

/// Sorted id list and the upper triangle of the weighted adjacency matrix with selection bits.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Description {
    pub ids: Vec<NodeId>,
    /// Row-major upper triangle: pairs `(i, j)` with `i < j`.
    pub cells: Vec<Cell>,
}

impl Description {
    pub fn of(g: &WeightedGraph) -> Self {
        let n = g.node_count();
        let mut cells = vec![Cell::default(); pair_count(n)];
        for e in g.edges() {
            let (i, j) = (g.index_of(e.u).unwrap(), g.index_of(e.v).unwrap());
            cells[cell_index(n, i, j)] = Cell { present: true, w: e.w, selected: e.selected };
        }
        Description { ids: g.ids().to_vec(), cells }
    }

    pub fn cell(&self, i: usize, j: usize) -> &Cell {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        &self.cells[cell_index(self.ids.len(), a, b)]
    }

    /// The described graph, if the description is well formed.
    pub fn graph(&self) -> Option<WeightedGraph> {
        if self.ids.windows(2).any(|w| w[0] >= w[1]) {
            return None;
        }
        let n = self.ids.len();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let c = self.cell(i, j);
                if c.present {
                    edges.push(Edge::new(self.ids[i], self.ids[j], c.w, c.selected));
                } else if c.selected || c.w != 0 {
                    return None;
                }
            }
        }
        WeightedGraph::new(self.ids.iter().copied(), edges).ok()
    }
}

fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn cell_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Shared description; every honest node holds the same one.
#[derive(Clone, Debug)]
pub struct UniversalCert(pub Arc<Description>);

impl PartialEq for UniversalCert {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Certificate for UniversalCert {
    fn encode_into(&self, out: &mut BitString, params: &EncodingParams) {
        let d = &self.0;
        out.push_gamma(d.ids.len() as u64 + 1).unwrap();
        for &id in &d.ids {
            out.push_uint(u64::from(id), params.idbits);
        }
        for c in &d.cells {
            out.push(c.present);
            out.push_uint(c.w, params.wbits);
            out.push(c.selected);
        }
    }

    fn decode_from(r: &mut BitReader<'_>, params: &EncodingParams) -> Result<Self, CodecError> {
        let n = usize::try_from(r.read_gamma()? - 1).map_err(|_| CodecError::InvalidValue("node count"))?;
        let need = (n as u128) * u128::from(params.idbits) + (pair_count(n) as u128) * (2 + u128::from(params.wbits));
        if need > r.remaining() as u128 {
            return Err(CodecError::Truncated);
        }
        let ids = (0..n).map(|_| crate::schemes::st::read_id(r, params)).collect::<Result<Vec<_>, _>>()?;
        let mut cells = Vec::with_capacity(pair_count(n));
        for _ in 0..pair_count(n) {
            let present = r.read_bit()?;
            let w = read_weight(r, params)?;
            let selected = r.read_bit()?;
            cells.push(Cell { present, w, selected });
        }
        Ok(UniversalCert(Arc::new(Description { ids, cells })))
    }

    fn encoded_len(&self, params: &EncodingParams) -> usize {
        let n = self.0.ids.len();
        gamma_len(n as u64 + 1) + n * params.idbits as usize + pair_count(n) * (2 + params.wbits as usize)
    }

    fn fields(&self) -> Vec<FieldSpec> {
        let n = self.0.ids.len();
        let mut out: Vec<FieldSpec> = (0..n).map(|i| FieldSpec::new(format!("id[{i}]"), FieldClass::Id)).collect();
        for i in 0..n {
            for j in i + 1..n {
                out.push(FieldSpec::new(format!("cell[{i},{j}].present"), FieldClass::Bit));
                out.push(FieldSpec::new(format!("cell[{i},{j}].w"), FieldClass::Weight));
                out.push(FieldSpec::new(format!("cell[{i},{j}].sel"), FieldClass::Bit));
            }
        }
        out
    }

    fn field(&self, name: &str) -> Option<u64> {
        let d = &self.0;
        if let Some((i, "")) = indexed(name, "id") {
            return d.ids.get(i).map(|&x| u64::from(x));
        }
        let (i, j, attr) = parse_cell(name, d.ids.len())?;
        let c = d.cell(i, j);
        match attr {
            "present" => Some(u64::from(c.present)),
            "w" => Some(c.w),
            "sel" => Some(u64::from(c.selected)),
            _ => None,
        }
    }

    fn set_field(&mut self, name: &str, value: u64) -> Result<(), TamperError> {
        if self.field(name).is_none() {
            return Err(TamperError::UnknownField(name.into()));
        }
        let bad = || TamperError::BadValue { field: name.into(), value };
        let d = Arc::make_mut(&mut self.0);
        if let Some((i, "")) = indexed(name, "id") {
            d.ids[i] = NodeId::try_from(value).map_err(|_| bad())?;
            return Ok(());
        }
        let (i, j, attr) = parse_cell(name, d.ids.len()).unwrap();
        let n = d.ids.len();
        let c = &mut d.cells[cell_index(n, i, j)];
        match attr {
            "present" if value <= 1 => c.present = value == 1,
            "sel" if value <= 1 => c.selected = value == 1,
            "w" => c.w = value,
            _ => return Err(bad()),
        }
        Ok(())
    }
}

fn parse_cell(name: &str, n: usize) -> Option<(usize, usize, &str)> {
    let rest = name.strip_prefix("cell[")?;
    let (pair, attr) = rest.split_once("].")?;
    let (i, j) = pair.split_once(',')?;
    let (i, j): (usize, usize) = (i.parse().ok()?, j.parse().ok()?);
    (i < j && j < n).then_some((i, j, attr))
}

pub fn universal_prove(g: &WeightedGraph, mode: ProveMode) -> Result<LabelAssignment<UniversalCert>, ProveError> {
    if mode == ProveMode::Strict && !is_mst(g, &g.selected_edges()) {
        return Err(ProveError::NotMinimal);
    }
    let shared = Arc::new(Description::of(g));
    Ok(g.ids().iter().map(|&id| (id, UniversalCert(Arc::clone(&shared)))).collect())
}

pub fn universal_verify(view: &LocalView<'_, UniversalCert>) -> Verdict {
    let mut verdict = Verdict::accept();
    verdict.require(view.incident.iter().all(|i| i.cert == view.cert), Reason::CertMismatch);

    let d = &view.cert.0;
    let Some(described) = d.graph() else {
        verdict.reject(Reason::DescribedNotMst);
        return verdict;
    };
    match described.index_of(view.id) {
        None => verdict.reject(Reason::RowMismatch),
        Some(me) => {
            let row: Vec<(NodeId, Weight, bool)> =
                described.incident(me).map(|(y, e)| (described.id(y), e.w, e.selected)).collect();
            let seen: Vec<(NodeId, Weight, bool)> =
                view.incident.iter().map(|i| (i.neighbor, i.weight, i.selected)).collect();
            verdict.require(row == seen, Reason::RowMismatch);
        }
    }
    verdict
        .require(described.is_connected() && is_mst(&described, &described.selected_edges()), Reason::DescribedNotMst);
    verdict
}

pub struct UniversalScheme;

impl Scheme for UniversalScheme {
    type Cert = UniversalCert;
    const TAG: SchemeTag = SchemeTag::Universal;

    fn prove(g: &WeightedGraph, mode: ProveMode) -> Result<LabelAssignment<UniversalCert>, ProveError> {
        universal_prove(g, mode)
    }

    fn verify(view: &LocalView<'_, UniversalCert>) -> Verdict {
        universal_verify(view)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    fn triangle() -> WeightedGraph {
        parse_graph("3 3\n1 2 1 1\n2 3 2 1\n1 3 3 0").unwrap()
    }

    #[test]
    fn identical_certificates() {
        let g = triangle();
        let l = universal_prove(&g, ProveMode::Strict).unwrap();
        assert_eq!(l.len(), 3);
        assert!(l.iter().all(|(_, c)| c == l.get(1).unwrap()));
        assert!(UniversalScheme::run(&g, &l).accepted);
    }

    #[test]
    fn single_node_description() {
        let g = parse_graph("1 0").unwrap();
        let l = universal_prove(&g, ProveMode::Strict).unwrap();
        let c = l.get(1).unwrap();
        assert_eq!(c.0.ids, vec![1]);
        assert!(c.0.cells.is_empty());
        assert!(UniversalScheme::run(&g, &l).accepted);
    }

    #[test]
    fn strict_prove_refuses_non_mst() {
        let g = parse_graph("3 3\n1 2 1 1\n2 3 2 0\n1 3 3 1").unwrap();
        assert_eq!(universal_prove(&g, ProveMode::Strict).err(), Some(ProveError::NotMinimal));
        let l = universal_prove(&g, ProveMode::BestEffort).unwrap();
        let report = UniversalScheme::run(&g, &l);
        assert!(!report.accepted);
        assert!(report.has_reason(Reason::DescribedNotMst));
    }

    #[test]
    fn encoded_len_formula_matches_encoding() {
        let g = triangle();
        let p = EncodingParams::for_graph(&g);
        let c = universal_prove(&g, ProveMode::Strict).unwrap().get(1).unwrap().clone();
        assert_eq!(c.encoded_len(&p), c.encode(&p).len());
        // gamma(4) + 3 ids of 2 bits + 3 pairs of (1 + 2 + 1) bits
        assert_eq!(c.encoded_len(&p), 5 + 6 + 12);
        assert_eq!(UniversalCert::decode(&c.encode(&p), &p).unwrap(), c);
    }

    #[test]
    fn phantom_component_rejected() {
        // describe the real triangle plus two phantom nodes joined only to each other
        let g = triangle();
        let phantom = parse_graph("5 4\n1 2 1 1\n2 3 2 1\n1 3 3 0\n40 41 1 1").unwrap();
        let fake = UniversalCert(Arc::new(Description::of(&phantom)));
        let l: LabelAssignment<_> = g.ids().iter().map(|&id| (id, fake.clone())).collect();
        let report = UniversalScheme::run(&g, &l);
        assert!(!report.accepted);
        assert!(report.verdicts.values().all(|v| v.reasons() == [Reason::DescribedNotMst]));
    }

    #[test]
    fn omitted_incident_edge_rejected_at_endpoints() {
        let g = triangle();
        let l = universal_prove(&g, ProveMode::Strict).unwrap();
        // drop edge (1,3): cell (0,2)
        let mut t = l.clone();
        for id in [1, 2, 3] {
            t = t.tamper(id, "cell[0,2].present", 0).unwrap().tamper(id, "cell[0,2].w", 0).unwrap();
        }
        let report = UniversalScheme::run(&g, &t);
        let rejecting: Vec<_> = report.rejecting().map(|(id, v)| (id, v.reasons().to_vec())).collect();
        assert_eq!(rejecting, vec![(1, vec![Reason::RowMismatch]), (3, vec![Reason::RowMismatch])]);
    }

    #[test]
    fn single_copy_tamper_is_a_mismatch() {
        let g = triangle();
        let l = universal_prove(&g, ProveMode::Strict).unwrap();
        let t = l.tamper(2, "cell[0,1].w", 2).unwrap();
        assert!(Arc::ptr_eq(&l.get(1).unwrap().0, &t.get(1).unwrap().0));
        let report = UniversalScheme::run(&g, &t);
        assert!(report.has_reason(Reason::CertMismatch));
        assert_eq!(t.tamper(2, "cell[1,0].w", 5), Err(TamperError::UnknownField("cell[1,0].w".into())));
    }
}
