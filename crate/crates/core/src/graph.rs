//! Weighted graphs with a candidate solution: every edge carries a selection bit.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

/// Node identifier. Identifiers are unique but not required to be contiguous.
pub type NodeId = u32;

/// Positive integer edge weight. `0` is reserved as the identity of path maxima.
pub type Weight = u64;

/// Largest admissible edge weight.
pub const MAX_WEIGHT: Weight = 1 << 32;

/// An undirected edge stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub w: Weight,
    pub selected: bool,
}

impl Edge {
    pub fn new(a: NodeId, b: NodeId, w: Weight, selected: bool) -> Self {
        let (u, v) = ordered(a, b);
        Edge { u, v, w, selected }
    }

    pub fn ends(&self) -> (NodeId, NodeId) {
        (self.u, self.v)
    }

    pub fn key(&self) -> EdgeKey {
        EdgeKey::new(self.w, self.u, self.v)
    }

    /// The endpoint opposite to `x`.
    pub fn other(&self, x: NodeId) -> NodeId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Total order on edges: weight first, then the smaller and the larger endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeKey {
    pub w: Weight,
    pub lo: NodeId,
    pub hi: NodeId,
}

impl EdgeKey {
    pub fn new(w: Weight, a: NodeId, b: NodeId) -> Self {
        let (lo, hi) = ordered(a, b);
        EdgeKey { w, lo, hi }
    }
}

/// A set of undirected edges, each normalized as `(min, max)`.
pub type EdgeSet = BTreeSet<(NodeId, NodeId)>;

pub fn ordered(a: NodeId, b: NodeId) -> (NodeId, NodeId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: self-loop on node {node}")]
    SelfLoop { line: usize, node: NodeId },
    #[error("line {line}: duplicate edge ({u}, {v})")]
    DuplicateEdge { line: usize, u: NodeId, v: NodeId },
    #[error("line {line}: duplicate node id {node}")]
    DuplicateNode { line: usize, node: NodeId },
    #[error("line {line}: weight {w} outside [1, 2^32]")]
    BadWeight { line: usize, w: Weight },
    #[error("edge ({u}, {v}) references an unknown node")]
    UnknownNode { u: NodeId, v: NodeId },
    #[error("header declares {declared} nodes but edges mention {found} distinct ids")]
    TooManyIds { declared: usize, found: usize },
    #[error("header declares {declared} edges but {found} were given")]
    EdgeCount { declared: usize, found: usize },
}

/// Undirected graph with distinct node ids, positive weights and a selection bit per edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    ids: Vec<NodeId>,
    edges: Vec<Edge>,
    // (neighbor index, edge index), ascending by neighbor id
    adj: Vec<Vec<(usize, usize)>>,
}

impl WeightedGraph {
    /// Builds a graph from an explicit node list and edge list.
    ///
    /// Edge-level errors carry `line = i + 1` where `i` is the position in `edges`.
    pub fn new(
        nodes: impl IntoIterator<Item = NodeId>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self, GraphError> {
        let mut ids: Vec<NodeId> = Vec::new();
        let mut seen = BTreeSet::new();
        for (i, id) in nodes.into_iter().enumerate() {
            if !seen.insert(id) {
                return Err(GraphError::DuplicateNode { line: i + 1, node: id });
            }
            ids.push(id);
        }
        ids.sort_unstable();
        let mut list: Vec<(Edge, usize)> = Vec::new();
        for (i, e) in edges.into_iter().enumerate() {
            let e = Edge::new(e.u, e.v, e.w, e.selected);
            if e.u == e.v {
                return Err(GraphError::SelfLoop { line: i + 1, node: e.u });
            }
            if e.w == 0 || e.w > MAX_WEIGHT {
                return Err(GraphError::BadWeight { line: i + 1, w: e.w });
            }
            list.push((e, i + 1));
        }
        list.sort_unstable_by_key(|(e, line)| (e.u, e.v, *line));
        for pair in list.windows(2) {
            if pair[0].0.ends() == pair[1].0.ends() {
                let (u, v) = pair[0].0.ends();
                return Err(GraphError::DuplicateEdge { line: pair[1].1, u, v });
            }
        }
        let list: Vec<Edge> = list.into_iter().map(|(e, _)| e).collect();
        let index: HashMap<NodeId, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let mut adj = vec![Vec::new(); ids.len()];
        for (ei, e) in list.iter().enumerate() {
            let (Some(&a), Some(&b)) = (index.get(&e.u), index.get(&e.v)) else {
                return Err(GraphError::UnknownNode { u: e.u, v: e.v });
            };
            adj[a].push((b, ei));
            adj[b].push((a, ei));
        }
        for row in &mut adj {
            row.sort_unstable();
        }
        Ok(WeightedGraph { ids, edges: list, adj })
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Node ids in ascending order. Position in this slice is the node's index.
    pub fn ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn id(&self, index: usize) -> NodeId {
        self.ids[index]
    }

    pub fn index_of(&self, id: NodeId) -> Option<usize> {
        self.ids.binary_search(&id).ok()
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.index_of(id).is_some()
    }

    /// Edges sorted by `(u, v)`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, a: NodeId, b: NodeId) -> Option<&Edge> {
        let key = ordered(a, b);
        self.edges.binary_search_by_key(&key, |e| e.ends()).ok().map(|i| &self.edges[i])
    }

    /// Incident `(neighbor index, edge)` pairs of node `index`, ascending by neighbor id.
    pub fn incident(&self, index: usize) -> impl Iterator<Item = (usize, &Edge)> + '_ {
        self.adj[index].iter().map(move |&(n, e)| (n, &self.edges[e]))
    }

    pub fn degree(&self, index: usize) -> usize {
        self.adj[index].len()
    }

    /// Largest weight present, `0` for an edgeless graph.
    pub fn max_weight(&self) -> Weight {
        self.edges.iter().map(|e| e.w).max().unwrap_or(0)
    }

    pub fn max_id(&self) -> NodeId {
        self.ids.last().copied().unwrap_or(0)
    }

    pub fn selected_edges(&self) -> EdgeSet {
        self.edges.iter().filter(|e| e.selected).map(|e| e.ends()).collect()
    }

    /// Same graph with the selection replaced by `selection`.
    pub fn with_selection(&self, selection: &EdgeSet) -> Self {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.selected = selection.contains(&e.ends());
        }
        g
    }

    /// Same graph with the weight of edge `(a, b)` replaced.
    pub fn with_weight(&self, a: NodeId, b: NodeId, w: Weight) -> Option<Self> {
        let key = ordered(a, b);
        let pos = self.edges.binary_search_by_key(&key, |e| e.ends()).ok()?;
        let mut g = self.clone();
        g.edges[pos].w = w;
        Some(g)
    }

    pub fn is_connected(&self) -> bool {
        if self.ids.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.ids.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for &(y, _) in &self.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    queue.push_back(y);
                }
            }
        }
        count == self.ids.len()
    }

    /// Renders the graph file format: `n m` followed by `u v w s` lines.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.ids.len(), self.edges.len());
        for e in &self.edges {
            let _ = writeln!(out, "{} {} {} {}", e.u, e.v, e.w, u8::from(e.selected));
        }
        out
    }
}

/// Parses the graph file format.
///
/// The node set is the set of ids mentioned by edges. When the header declares
/// more nodes than that, the missing ones are the smallest unused ids from 1 up.
/// Blank lines and lines starting with `#` are ignored.
pub fn parse_graph(text: &str) -> Result<WeightedGraph, GraphError> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(GraphError::Malformed { line: 1, reason: "missing header".into() })?;
    let head = parse_numbers(hline, header, 2)?;
    let (n, m) = (head[0] as usize, head[1] as usize);

    let mut edges = Vec::with_capacity(m);
    let mut mentioned = BTreeSet::new();
    let mut pairs = HashMap::new();
    for (line, text) in lines {
        let f = parse_numbers(line, text, 4)?;
        let (u, v) = (to_id(line, f[0])?, to_id(line, f[1])?);
        if u == v {
            return Err(GraphError::SelfLoop { line, node: u });
        }
        if f[2] == 0 || f[2] > MAX_WEIGHT {
            return Err(GraphError::BadWeight { line, w: f[2] });
        }
        let selected = match f[3] {
            0 => false,
            1 => true,
            s => return Err(GraphError::Malformed { line, reason: format!("selection bit must be 0 or 1, got {s}") }),
        };
        if pairs.insert(ordered(u, v), line).is_some() {
            let (a, b) = ordered(u, v);
            return Err(GraphError::DuplicateEdge { line, u: a, v: b });
        }
        mentioned.insert(u);
        mentioned.insert(v);
        edges.push(Edge::new(u, v, f[2], selected));
    }
    if edges.len() != m {
        return Err(GraphError::EdgeCount { declared: m, found: edges.len() });
    }
    if mentioned.len() > n {
        return Err(GraphError::TooManyIds { declared: n, found: mentioned.len() });
    }
    let mut next: NodeId = 1;
    while mentioned.len() < n {
        if mentioned.insert(next) {
            continue;
        }
        next += 1;
    }
    WeightedGraph::new(mentioned, edges)
}

fn parse_numbers(line: usize, text: &str, expected: usize) -> Result<Vec<u64>, GraphError> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != expected {
        return Err(GraphError::Malformed {
            line,
            reason: format!("expected {expected} fields, found {}", fields.len()),
        });
    }
    fields
        .iter()
        .map(|f| {
            f.parse::<u64>()
                .map_err(|_| GraphError::Malformed { line, reason: format!("not an unsigned integer: {f:?}") })
        })
        .collect()
}

fn to_id(line: usize, x: u64) -> Result<NodeId, GraphError> {
    NodeId::try_from(x).map_err(|_| GraphError::Malformed { line, reason: format!("node id {x} exceeds 32 bits") })
}
