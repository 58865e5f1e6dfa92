//! Sequential MST oracles: Kruskal, spanning-tree test and the cycle property.

use thiserror::Error;

use crate::graph::{EdgeSet, Weight, WeightedGraph};
use crate::tree::root_at;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MstError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("edge set is not a spanning tree")]
    NotSpanningTree,
}

/// Disjoint-set forest over `0..n` with path halving and union by size.
#[derive(Clone, Debug)]
pub struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// Kruskal's algorithm with edges ranked by `(w, min id, max id)`.
pub fn kruskal_mst(g: &WeightedGraph) -> Result<EdgeSet, MstError> {
    let mut order: Vec<_> = g.edges().iter().collect();
    order.sort_unstable_by_key(|e| e.key());
    let mut dsu = Dsu::new(g.node_count());
    let mut tree = EdgeSet::new();
    for e in order {
        let (a, b) = (g.index_of(e.u).unwrap(), g.index_of(e.v).unwrap());
        if dsu.union(a, b) {
            tree.insert(e.ends());
        }
    }
    if tree.len() + 1 != g.node_count().max(1) {
        return Err(MstError::Disconnected);
    }
    Ok(tree)
}

/// True iff `edges` are edges of `g` forming a connected, acyclic subgraph covering every node.
pub fn is_spanning_tree(g: &WeightedGraph, edges: &EdgeSet) -> bool {
    if g.node_count() == 0 || edges.len() + 1 != g.node_count() {
        return false;
    }
    let mut dsu = Dsu::new(g.node_count());
    for &(u, v) in edges {
        if g.edge(u, v).is_none() {
            return false;
        }
        if !dsu.union(g.index_of(u).unwrap(), g.index_of(v).unwrap()) {
            return false;
        }
    }
    true
}

pub fn total_weight(g: &WeightedGraph, edges: &EdgeSet) -> Weight {
    edges.iter().filter_map(|&(u, v)| g.edge(u, v)).map(|e| e.w).sum()
}

/// Cycle property: every edge outside `edges` weighs at least the path maximum between its ends.
pub fn check_cycle_property(g: &WeightedGraph, edges: &EdgeSet) -> Result<bool, MstError> {
    let Some(&root) = g.ids().first() else {
        return Err(MstError::NotSpanningTree);
    };
    let t = root_at(g, edges, root).map_err(|_| MstError::NotSpanningTree)?;
    Ok(g.edges().iter().filter(|e| !edges.contains(&e.ends())).all(|e| e.w >= t.path_max(e.u, e.v).unwrap()))
}

/// True iff `edges` is a minimum spanning tree of `g` (weight comparison against Kruskal).
pub fn is_mst(g: &WeightedGraph, edges: &EdgeSet) -> bool {
    if !is_spanning_tree(g, edges) {
        return false;
    }
    match kruskal_mst(g) {
        Ok(best) => total_weight(g, &best) == total_weight(g, edges),
        Err(_) => false,
    }
}
