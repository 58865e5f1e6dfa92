//! Scheme-agnostic certification machinery.
//!
//! A scheme is a prover assigning one [`Certificate`] per node and a verifier that
//! decides from a single [`LocalView`]. [`run_round`] builds every view, runs the
//! verifier at every node independently and accepts iff all nodes accept.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::bits::{width_for, BitReader, BitString, CodecError};
use crate::graph::{GraphError, NodeId, Weight, WeightedGraph};
use crate::mst::MstError;
use crate::tree::TreeError;

/// Instance-wide field widths shared by prover and verifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EncodingParams {
    /// `ceil(log2(max id + 1))`
    pub idbits: u32,
    /// `ceil(log2(W + 1))`
    pub wbits: u32,
}

impl EncodingParams {
    pub fn for_graph(g: &WeightedGraph) -> Self {
        EncodingParams { idbits: width_for(u64::from(g.max_id())), wbits: width_for(g.max_weight()) }
    }

    pub fn max_id(&self) -> u64 {
        low_mask(self.idbits)
    }

    pub fn max_weight(&self) -> u64 {
        low_mask(self.wbits)
    }
}

fn low_mask(width: u32) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// Stable, machine-readable rejection reasons.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Reason {
    // spanning tree
    RootMismatch,
    DistGap,
    ParentCount,
    StraySelected,
    /// A spanning-tree failure inside a composite scheme.
    St(StFault),
    // universal
    CertMismatch,
    RowMismatch,
    DescribedNotMst,
    // kruskal list
    ListMismatch,
    ListNotTree,
    IncidentMismatch,
    LighterEdgeExists,
    // boruvka
    FragTree,
    MwoeMismatch,
    LighterOutgoing,
    MwoeAbsent,
    MergeInconsistent,
    EdgeNeverChosen,
    NotSingleFragment,
    // anchors
    ListShift,
    MaxChain,
    NoCommonAnchor,
    CycleProperty,
    Levels,
    FlagResolve,
    Prefix,
    /// The node's own certificate or a neighbor's could not be decoded.
    Malformed,
}

/// Spanning-tree check failures, shared by every scheme that embeds a tree certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StFault {
    RootMismatch,
    DistGap,
    ParentCount,
    StraySelected,
}

impl StFault {
    pub fn as_str(self) -> &'static str {
        match self {
            StFault::RootMismatch => "ROOT-MISMATCH",
            StFault::DistGap => "DIST-GAP",
            StFault::ParentCount => "PARENT-COUNT",
            StFault::StraySelected => "STRAY-SELECTED",
        }
    }

    pub fn plain(self) -> Reason {
        match self {
            StFault::RootMismatch => Reason::RootMismatch,
            StFault::DistGap => Reason::DistGap,
            StFault::ParentCount => Reason::ParentCount,
            StFault::StraySelected => Reason::StraySelected,
        }
    }
}

impl Reason {
    pub fn as_str(self) -> &'static str {
        match self {
            Reason::RootMismatch => "ROOT-MISMATCH",
            Reason::DistGap => "DIST-GAP",
            Reason::ParentCount => "PARENT-COUNT",
            Reason::StraySelected => "STRAY-SELECTED",
            Reason::St(f) => match f {
                StFault::RootMismatch => "ST-ROOT-MISMATCH",
                StFault::DistGap => "ST-DIST-GAP",
                StFault::ParentCount => "ST-PARENT-COUNT",
                StFault::StraySelected => "ST-STRAY-SELECTED",
            },
            Reason::CertMismatch => "CERT-MISMATCH",
            Reason::RowMismatch => "ROW-MISMATCH",
            Reason::DescribedNotMst => "DESCRIBED-NOT-MST",
            Reason::ListMismatch => "LIST-MISMATCH",
            Reason::ListNotTree => "LIST-NOT-TREE",
            Reason::IncidentMismatch => "INCIDENT-MISMATCH",
            Reason::LighterEdgeExists => "LIGHTER-EDGE-EXISTS",
            Reason::FragTree => "FRAG-TREE",
            Reason::MwoeMismatch => "MWOE-MISMATCH",
            Reason::LighterOutgoing => "LIGHTER-OUTGOING",
            Reason::MwoeAbsent => "MWOE-ABSENT",
            Reason::MergeInconsistent => "MERGE-INCONSISTENT",
            Reason::EdgeNeverChosen => "EDGE-NEVER-CHOSEN",
            Reason::NotSingleFragment => "NOT-SINGLE-FRAGMENT",
            Reason::ListShift => "LIST-SHIFT",
            Reason::MaxChain => "MAX-CHAIN",
            Reason::NoCommonAnchor => "NO-COMMON-ANCHOR",
            Reason::CycleProperty => "CYCLE-PROPERTY",
            Reason::Levels => "LEVELS",
            Reason::FlagResolve => "FLAG-RESOLVE",
            Reason::Prefix => "PREFIX",
            Reason::Malformed => "MALFORMED",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Decision of one node. Accepted iff no reason was recorded.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Verdict {
    reasons: Vec<Reason>,
}

impl Verdict {
    pub fn accept() -> Self {
        Verdict::default()
    }

    pub fn rejecting(reason: Reason) -> Self {
        Verdict { reasons: vec![reason] }
    }

    pub fn accepted(&self) -> bool {
        self.reasons.is_empty()
    }

    /// Reasons in first-seen order, without duplicates.
    pub fn reasons(&self) -> &[Reason] {
        &self.reasons
    }

    pub fn reject(&mut self, reason: Reason) {
        if !self.reasons.contains(&reason) {
            self.reasons.push(reason);
        }
    }

    /// Rejects with `reason` unless `ok`.
    pub fn require(&mut self, ok: bool, reason: Reason) {
        if !ok {
            self.reject(reason);
        }
    }
}

/// A structured certificate with a canonical bit encoding.
pub trait Certificate: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn encode_into(&self, out: &mut BitString, params: &EncodingParams);

    fn decode_from(reader: &mut BitReader<'_>, params: &EncodingParams) -> Result<Self, CodecError>;

    /// Length of the canonical encoding.
    fn encoded_len(&self, params: &EncodingParams) -> usize {
        self.encode(params).len()
    }

    /// Tamperable fields of this certificate.
    fn fields(&self) -> Vec<FieldSpec>;

    fn field(&self, name: &str) -> Option<u64>;

    fn set_field(&mut self, name: &str, value: u64) -> Result<(), TamperError>;

    fn encode(&self, params: &EncodingParams) -> BitString {
        let mut out = BitString::new();
        self.encode_into(&mut out, params);
        out
    }

    /// Decodes a whole bit string; trailing bits are an error.
    fn decode(bits: &BitString, params: &EncodingParams) -> Result<Self, CodecError> {
        let mut r = bits.reader();
        let c = Self::decode_from(&mut r, params)?;
        r.finish()?;
        Ok(c)
    }
}

/// Value domain of a certificate field, used to draw type-correct replacements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldClass {
    /// Identifier of the claimed root of the input tree.
    RootId,
    /// Hop distance to the root of the input tree.
    Dist,
    /// A stored path maximum.
    MaxWeight,
    /// Any other node identifier.
    Id,
    /// An edge weight.
    Weight,
    /// Any other counter (hop distance inside a fragment, list length).
    Counter,
    /// A child number inside an overlay name (at least 1).
    NameNumber,
    /// Component-parent flag: 0 root, 1 up, 2 down.
    Flag,
    Bit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub name: String,
    pub class: FieldClass,
}

impl FieldSpec {
    pub fn new(name: impl Into<String>, class: FieldClass) -> Self {
        FieldSpec { name: name.into(), class }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TamperError {
    #[error("unknown field {0:?}")]
    UnknownField(String),
    #[error("node {0} has no certificate")]
    UnknownNode(NodeId),
    #[error("new value equals the current value {0}")]
    SameValue(u64),
    #[error("value {value} is not valid for field {field:?}")]
    BadValue { field: String, value: u64 },
}

/// One incident edge as seen from a node.
#[derive(Clone, Copy, Debug)]
pub struct Incident<'a, C> {
    pub neighbor: NodeId,
    pub weight: Weight,
    pub selected: bool,
    pub cert: &'a C,
}

/// Everything one node sees during verification.
#[derive(Clone, Debug)]
pub struct LocalView<'a, C> {
    pub params: &'a EncodingParams,
    pub id: NodeId,
    pub cert: &'a C,
    /// Ascending by neighbor id.
    pub incident: Vec<Incident<'a, C>>,
}

impl<'a, C> LocalView<'a, C> {
    pub fn selected(&self) -> impl Iterator<Item = &Incident<'a, C>> + '_ {
        self.incident.iter().filter(|i| i.selected)
    }

    pub fn unselected(&self) -> impl Iterator<Item = &Incident<'a, C>> + '_ {
        self.incident.iter().filter(|i| !i.selected)
    }

    pub fn neighbor(&self, id: NodeId) -> Option<&Incident<'a, C>> {
        self.incident.binary_search_by_key(&id, |i| i.neighbor).ok().map(|k| &self.incident[k])
    }
}

/// Map from node id to certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct LabelAssignment<C> {
    certs: BTreeMap<NodeId, C>,
}

impl<C> Default for LabelAssignment<C> {
    fn default() -> Self {
        LabelAssignment { certs: BTreeMap::new() }
    }
}

impl<C> LabelAssignment<C> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, id: NodeId, cert: C) {
        self.certs.insert(id, cert);
    }

    pub fn get(&self, id: NodeId) -> Option<&C> {
        self.certs.get(&id)
    }

    pub fn get_mut(&mut self, id: NodeId) -> Option<&mut C> {
        self.certs.get_mut(&id)
    }

    pub fn len(&self) -> usize {
        self.certs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.certs.is_empty()
    }

    /// Ascending by node id.
    pub fn iter(&self) -> impl Iterator<Item = (NodeId, &C)> + '_ {
        self.certs.iter().map(|(&id, c)| (id, c))
    }

    pub fn ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.certs.keys().copied()
    }

    /// True iff the domain is exactly the node set of `g`.
    pub fn covers(&self, g: &WeightedGraph) -> bool {
        self.certs.len() == g.node_count() && g.ids().iter().all(|id| self.certs.contains_key(id))
    }
}

impl<C> FromIterator<(NodeId, C)> for LabelAssignment<C> {
    fn from_iter<I: IntoIterator<Item = (NodeId, C)>>(iter: I) -> Self {
        LabelAssignment { certs: iter.into_iter().collect() }
    }
}

impl<C: Certificate> LabelAssignment<C> {
    /// Copy of the assignment with exactly one field of one certificate replaced.
    pub fn tamper(&self, node: NodeId, field: &str, value: u64) -> Result<Self, TamperError> {
        let cert = self.certs.get(&node).ok_or(TamperError::UnknownNode(node))?;
        let old = cert.field(field).ok_or_else(|| TamperError::UnknownField(field.to_string()))?;
        if old == value {
            return Err(TamperError::SameValue(old));
        }
        let mut out = self.clone();
        out.certs.get_mut(&node).unwrap().set_field(field, value)?;
        Ok(out)
    }
}

/// Outcome of one verification round.
#[derive(Clone, Debug, PartialEq)]
pub struct VerdictReport {
    pub verdicts: BTreeMap<NodeId, Verdict>,
    pub accepted: bool,
    pub max_bits: usize,
    pub mean_bits: f64,
}

impl VerdictReport {
    pub fn rejecting(&self) -> impl Iterator<Item = (NodeId, &Verdict)> + '_ {
        self.verdicts.iter().filter(|(_, v)| !v.accepted()).map(|(&id, v)| (id, v))
    }

    pub fn has_reason(&self, reason: Reason) -> bool {
        self.verdicts.values().any(|v| v.reasons().contains(&reason))
    }

    pub fn rejection_count(&self) -> usize {
        self.rejecting().count()
    }
}

/// A (prover, verifier) pair.
pub trait Scheme {
    type Cert: Certificate;
    const TAG: SchemeTag;

    /// Honest prover for the selection carried by `g`.
    fn prove(g: &WeightedGraph, mode: ProveMode) -> Result<LabelAssignment<Self::Cert>, ProveError>;

    fn verify(view: &LocalView<'_, Self::Cert>) -> Verdict;

    fn run(g: &WeightedGraph, labels: &LabelAssignment<Self::Cert>) -> VerdictReport {
        run_round(g, labels, &EncodingParams::for_graph(g), Self::verify)
    }
}

/// Whether the prover validates its precondition or labels whatever it is given.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProveMode {
    /// Refuse instances whose selection is not an MST.
    Strict,
    /// Run the same pipeline without the MST gate, for soundness experiments.
    BestEffort,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProveError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("selection is not a spanning tree")]
    NotSpanningTree,
    #[error("selection is not a minimum spanning tree")]
    NotMinimal,
    #[error("internal prover error: {0}")]
    Internal(String),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Mst(#[from] MstError),
}

/// Runs one verification round: every node checks its local view independently.
///
/// Panics if `labels` is not total over the nodes of `g`.
pub fn run_round<C, F>(
    g: &WeightedGraph,
    labels: &LabelAssignment<C>,
    params: &EncodingParams,
    verifier: F,
) -> VerdictReport
where
    C: Certificate,
    F: Fn(&LocalView<'_, C>) -> Verdict + Sync,
{
    let certs: Vec<Option<&C>> = g
        .ids()
        .iter()
        .map(|&id| Some(labels.get(id).unwrap_or_else(|| panic!("no certificate for node {id}"))))
        .collect();
    let sizes: Vec<usize> = certs.iter().map(|c| c.unwrap().encoded_len(params)).collect();
    round(g, &certs, &sizes, params, verifier)
}

fn round<C, F>(
    g: &WeightedGraph,
    certs: &[Option<&C>],
    sizes: &[usize],
    params: &EncodingParams,
    verifier: F,
) -> VerdictReport
where
    C: Certificate,
    F: Fn(&LocalView<'_, C>) -> Verdict + Sync,
{
    let verdicts: Vec<Verdict> = (0..g.node_count())
        .into_par_iter()
        .map(|x| {
            let Some(own) = certs[x] else {
                return Verdict::rejecting(Reason::Malformed);
            };
            let mut incident = Vec::with_capacity(g.degree(x));
            for (y, e) in g.incident(x) {
                let Some(cert) = certs[y] else {
                    return Verdict::rejecting(Reason::Malformed);
                };
                incident.push(Incident { neighbor: g.id(y), weight: e.w, selected: e.selected, cert });
            }
            let view = LocalView { params, id: g.id(x), cert: own, incident };
            verifier(&view)
        })
        .collect();
    let accepted = verdicts.iter().all(Verdict::accepted);
    let max_bits = sizes.iter().copied().max().unwrap_or(0);
    let mean_bits = if sizes.is_empty() { 0.0 } else { sizes.iter().sum::<usize>() as f64 / sizes.len() as f64 };
    VerdictReport { verdicts: g.ids().iter().copied().zip(verdicts).collect(), accepted, max_bits, mean_bits }
}

/// Scheme identifiers used by the CLI and certificate dumps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeTag {
    St,
    Universal,
    Kruskal,
    Boruvka,
    Ancestors,
    Kk,
}

impl SchemeTag {
    pub const ALL: [SchemeTag; 6] = [
        SchemeTag::St,
        SchemeTag::Universal,
        SchemeTag::Kruskal,
        SchemeTag::Boruvka,
        SchemeTag::Ancestors,
        SchemeTag::Kk,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeTag::St => "st",
            SchemeTag::Universal => "universal",
            SchemeTag::Kruskal => "kruskal",
            SchemeTag::Boruvka => "boruvka",
            SchemeTag::Ancestors => "ancestors",
            SchemeTag::Kk => "kk",
        }
    }

    /// Whether the scheme certifies minimality (every scheme except `st`).
    pub fn certifies_minimality(self) -> bool {
        self != SchemeTag::St
    }
}

impl fmt::Display for SchemeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeTag {
    type Err = DumpError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SchemeTag::ALL.into_iter().find(|t| t.as_str() == s).ok_or_else(|| DumpError::UnknownScheme(s.to_string()))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DumpError {
    #[error("unknown scheme tag {0:?}")]
    UnknownScheme(String),
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("dump is for scheme {found}, expected {expected}")]
    WrongScheme { expected: SchemeTag, found: SchemeTag },
    #[error("no certificate for node {0}")]
    MissingNode(NodeId),
    #[error("certificate for unknown node {0}")]
    UnknownNode(NodeId),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Text dump of encoded certificates.
///
/// ```text
/// idbits=<k> wbits=<k> scheme=<tag>
/// id <decimal> bits <hex> len <decimal>
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertDump {
    pub params: EncodingParams,
    pub scheme: SchemeTag,
    /// Ascending by node id.
    pub entries: Vec<(NodeId, BitString)>,
}

impl CertDump {
    pub fn from_labels<C: Certificate>(scheme: SchemeTag, params: EncodingParams, labels: &LabelAssignment<C>) -> Self {
        CertDump { params, scheme, entries: labels.iter().map(|(id, c)| (id, c.encode(&params))).collect() }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("idbits={} wbits={} scheme={}\n", self.params.idbits, self.params.wbits, self.scheme);
        for (id, bits) in &self.entries {
            out.push_str(&format!("id {id} bits {} len {}\n", bits.to_hex(), bits.len()));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, DumpError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
        let (hl, header) = lines.next().ok_or(DumpError::Malformed { line: 1, reason: "missing header".into() })?;
        let mut idbits = None;
        let mut wbits = None;
        let mut scheme = None;
        for tok in header.split_whitespace() {
            let (k, v) =
                tok.split_once('=').ok_or_else(|| malformed(hl, format!("expected key=value, got {tok:?}")))?;
            match k {
                "idbits" => idbits = Some(v.parse::<u32>().map_err(|_| malformed(hl, "bad idbits"))?),
                "wbits" => wbits = Some(v.parse::<u32>().map_err(|_| malformed(hl, "bad wbits"))?),
                "scheme" => scheme = Some(v.parse::<SchemeTag>()?),
                _ => return Err(malformed(hl, format!("unknown header key {k:?}"))),
            }
        }
        let (Some(idbits), Some(wbits), Some(scheme)) = (idbits, wbits, scheme) else {
            return Err(malformed(hl, "header needs idbits, wbits and scheme"));
        };
        if idbits > 32 || wbits > 64 {
            return Err(malformed(hl, "field width out of range"));
        }
        let mut entries: Vec<(NodeId, BitString)> = Vec::new();
        for (line, text) in lines {
            let f: Vec<&str> = text.split_whitespace().collect();
            if f.len() != 6 || f[0] != "id" || f[2] != "bits" || f[4] != "len" {
                return Err(malformed(line, "expected `id <n> bits <hex> len <n>`"));
            }
            let id: NodeId = f[1].parse().map_err(|_| malformed(line, "bad node id"))?;
            let len: usize = f[5].parse().map_err(|_| malformed(line, "bad length"))?;
            let bits = BitString::from_hex(f[3], len).map_err(|e| malformed(line, e.to_string()))?;
            if entries.iter().any(|(other, _)| *other == id) {
                return Err(malformed(line, format!("duplicate node id {id}")));
            }
            entries.push((id, bits));
        }
        entries.sort_by_key(|(id, _)| *id);
        Ok(CertDump { params: EncodingParams { idbits, wbits }, scheme, entries })
    }

    /// Decodes every entry; nodes whose bits do not decode map to `None`.
    pub fn decode<C: Certificate>(&self, g: &WeightedGraph) -> Result<BTreeMap<NodeId, Option<C>>, DumpError> {
        let mut out = BTreeMap::new();
        for (id, bits) in &self.entries {
            if !g.contains(*id) {
                return Err(DumpError::UnknownNode(*id));
            }
            out.insert(*id, C::decode(bits, &self.params).ok());
        }
        if let Some(&missing) = g.ids().iter().find(|id| !out.contains_key(id)) {
            return Err(DumpError::MissingNode(missing));
        }
        Ok(out)
    }

    /// Verifies a dump: nodes that cannot decode their own or a neighbor's certificate reject `MALFORMED`.
    pub fn verify<S: Scheme>(&self, g: &WeightedGraph) -> Result<VerdictReport, DumpError> {
        if self.scheme != S::TAG {
            return Err(DumpError::WrongScheme { expected: S::TAG, found: self.scheme });
        }
        let decoded = self.decode::<S::Cert>(g)?;
        let certs: Vec<Option<&S::Cert>> = g.ids().iter().map(|id| decoded[id].as_ref()).collect();
        let sizes: Vec<usize> = self.entries.iter().map(|(_, b)| b.len()).collect();
        Ok(round(g, &certs, &sizes, &self.params, S::verify))
    }
}

fn malformed(line: usize, reason: impl Into<String>) -> DumpError {
    DumpError::Malformed { line, reason: reason.into() }
}
