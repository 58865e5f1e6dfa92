//! Rooted orientations of a selected edge set, path maxima and centroids.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{EdgeSet, NodeId, Weight, WeightedGraph};
use crate::mst::is_spanning_tree;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("selected edges do not form a spanning tree")]
    NotSpanningTree,
    #[error("node {0} is not in the graph")]
    UnknownNode(NodeId),
    #[error("empty node subset")]
    EmptySubset,
    #[error("node subset does not induce a connected subtree")]
    DisconnectedSubset,
}

/// A spanning tree oriented towards a root. Indices follow the originating graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    ids: Vec<NodeId>,
    root: usize,
    parent: Vec<usize>,
    parent_weight: Vec<Weight>,
    depth: Vec<u32>,
    children: Vec<Vec<usize>>,
    order: Vec<usize>,
}

/// Orients the spanning tree `edges` of `g` away from `root`, breadth first.
pub fn root_at(g: &WeightedGraph, edges: &EdgeSet, root: NodeId) -> Result<RootedTree, TreeError> {
    let r = g.index_of(root).ok_or(TreeError::UnknownNode(root))?;
    if !is_spanning_tree(g, edges) {
        return Err(TreeError::NotSpanningTree);
    }
    let forest = bfs_forest(g, edges, &[r]);
    Ok(forest.into_tree(r))
}

impl RootedTree {
    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn id(&self, index: usize) -> NodeId {
        self.ids[index]
    }

    pub fn index_of(&self, id: NodeId) -> Option<usize> {
        self.ids.binary_search(&id).ok()
    }

    pub fn root(&self) -> NodeId {
        self.ids[self.root]
    }

    pub fn root_index(&self) -> usize {
        self.root
    }

    /// Parent id; the root maps to itself.
    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.index_of(id).map(|i| self.ids[self.parent[i]])
    }

    pub fn depth(&self, id: NodeId) -> Option<u32> {
        self.index_of(id).map(|i| self.depth[i])
    }

    pub fn parent_index(&self, index: usize) -> Option<usize> {
        (index != self.root).then(|| self.parent[index])
    }

    /// Weight of the edge to the parent, `0` at the root.
    pub fn parent_weight(&self, index: usize) -> Weight {
        self.parent_weight[index]
    }

    pub fn depth_of(&self, index: usize) -> u32 {
        self.depth[index]
    }

    pub fn children(&self, index: usize) -> &[usize] {
        &self.children[index]
    }

    /// Breadth-first order from the root.
    pub fn bfs_order(&self) -> &[usize] {
        &self.order
    }

    /// Tree neighbors of `index`: its parent (if any) followed by its children.
    pub fn neighbors(&self, index: usize) -> impl Iterator<Item = usize> + '_ {
        self.parent_index(index).into_iter().chain(self.children[index].iter().copied())
    }

    /// Maximum weight on the tree path between `u` and `v`, walking the path explicitly.
    /// `path_max(u, u) = 0`.
    pub fn path_max(&self, u: NodeId, v: NodeId) -> Option<Weight> {
        let (mut a, mut b) = (self.index_of(u)?, self.index_of(v)?);
        let mut best = 0;
        while a != b {
            if self.depth[a] >= self.depth[b] {
                best = best.max(self.parent_weight[a]);
                a = self.parent[a];
            } else {
                best = best.max(self.parent_weight[b]);
                b = self.parent[b];
            }
        }
        Some(best)
    }

    /// Node indices on the tree path from `u` to `v`, both included.
    pub fn path(&self, u: usize, v: usize) -> Vec<usize> {
        let (mut a, mut b) = (u, v);
        let mut front = vec![];
        let mut back = vec![];
        while a != b {
            if self.depth[a] >= self.depth[b] {
                front.push(a);
                a = self.parent[a];
            } else {
                back.push(b);
                b = self.parent[b];
            }
        }
        front.push(a);
        front.extend(back.into_iter().rev());
        front
    }

    /// Centroid of the subtree induced by `subset`: removing it leaves components of
    /// size at most `|subset| / 2`. Ties go to the smallest id.
    pub fn centroid(&self, subset: &[NodeId]) -> Result<NodeId, TreeError> {
        if subset.is_empty() {
            return Err(TreeError::EmptySubset);
        }
        let mut member = vec![false; self.ids.len()];
        let mut nodes = Vec::with_capacity(subset.len());
        for &id in subset {
            let i = self.index_of(id).ok_or(TreeError::UnknownNode(id))?;
            if !member[i] {
                member[i] = true;
                nodes.push(i);
            }
        }
        let order = self.component_order(nodes[0], &member);
        if order.len() != nodes.len() {
            return Err(TreeError::DisconnectedSubset);
        }
        Ok(self.ids[self.centroid_of(&order, &member)])
    }

    /// Breadth-first `(node, predecessor)` order of the component of `start` among `member` nodes.
    pub(crate) fn component_order(&self, start: usize, member: &[bool]) -> Vec<(usize, usize)> {
        let mut order = vec![(start, start)];
        let mut head = 0;
        while head < order.len() {
            let (x, from) = order[head];
            head += 1;
            for y in self.neighbors(x) {
                if y != from && member[y] {
                    order.push((y, x));
                }
            }
        }
        order
    }

    /// Centroid index of a component given in breadth-first order.
    pub(crate) fn centroid_of(&self, order: &[(usize, usize)], member: &[bool]) -> usize {
        debug_assert!(order.iter().all(|&(x, _)| member[x]));
        let total = order.len();
        let pos: std::collections::HashMap<usize, usize> =
            order.iter().enumerate().map(|(k, &(x, _))| (x, k)).collect();
        let mut size = vec![1usize; total];
        let mut heaviest = vec![0usize; total];
        for k in (1..total).rev() {
            let p = pos[&order[k].1];
            size[p] += size[k];
            heaviest[p] = heaviest[p].max(size[k]);
        }
        let mut best: Option<usize> = None;
        for k in 0..total {
            let worst = heaviest[k].max(total - size[k]);
            if worst <= total / 2 {
                let x = order[k].0;
                if best.is_none_or(|b| self.ids[x] < self.ids[b]) {
                    best = Some(x);
                }
            }
        }
        best.expect("every tree has a centroid")
    }
}

/// Breadth-first forest over the selected edges, one tree per component.
///
/// Components are rooted at `roots` where given, otherwise at their smallest id.
/// Selected edges that close a cycle are ignored.
pub(crate) struct Forest {
    pub ids: Vec<NodeId>,
    pub parent: Vec<usize>,
    pub parent_weight: Vec<Weight>,
    pub depth: Vec<u32>,
    pub component_root: Vec<usize>,
    pub order: Vec<usize>,
}

impl Forest {
    fn into_tree(self, root: usize) -> RootedTree {
        let mut children = vec![Vec::new(); self.ids.len()];
        for &x in &self.order {
            if x != root {
                children[self.parent[x]].push(x);
            }
        }
        for c in &mut children {
            c.sort_unstable();
        }
        RootedTree {
            ids: self.ids,
            root,
            parent: self.parent,
            parent_weight: self.parent_weight,
            depth: self.depth,
            children,
            order: self.order,
        }
    }
}

pub(crate) fn bfs_forest(g: &WeightedGraph, edges: &EdgeSet, roots: &[usize]) -> Forest {
    let n = g.node_count();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut parent_weight = vec![0; n];
    let mut depth = vec![0u32; n];
    let mut component_root: Vec<usize> = (0..n).collect();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let starts = roots.iter().copied().chain(0..n);
    for s in starts {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            component_root[x] = s;
            for (y, e) in g.incident(x) {
                if !seen[y] && edges.contains(&e.ends()) {
                    seen[y] = true;
                    parent[y] = x;
                    parent_weight[y] = e.w;
                    depth[y] = depth[x] + 1;
                    queue.push_back(y);
                }
            }
        }
    }
    Forest { ids: g.ids().to_vec(), parent, parent_weight, depth, component_root, order }
}
