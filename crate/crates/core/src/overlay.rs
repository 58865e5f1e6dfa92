//! Overlay tree by recursive centroid removal, with compact names, component-parent
//! flags and per-level path maxima.

use std::cmp::Reverse;
use std::collections::VecDeque;

use crate::bits::BitString;
use crate::graph::{NodeId, Weight};
use crate::tree::RootedTree;

/// Direction of a node's component parent at one overlay level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flag {
    /// The node is the level's anchor.
    Root,
    /// The component parent is the input-tree parent.
    Up,
    /// The component parent is an input-tree child.
    Down,
}

impl Flag {
    pub fn code(self) -> u64 {
        match self {
            Flag::Root => 0,
            Flag::Up => 1,
            Flag::Down => 2,
        }
    }

    pub fn from_code(code: u64) -> Option<Flag> {
        match code {
            0 => Some(Flag::Root),
            1 => Some(Flag::Up),
            2 => Some(Flag::Down),
            _ => None,
        }
    }
}

/// One node at one overlay level: its component parent toward the level's anchor and
/// the input-tree path maximum to that anchor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Link {
    pub flag: Flag,
    /// Node index; the anchor points to itself.
    pub parent: usize,
    pub m: Weight,
}

/// Indices follow the rooted tree the overlay was built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlayTree {
    ids: Vec<NodeId>,
    root: usize,
    parent: Vec<Option<usize>>,
    names: Vec<Vec<u32>>,
    links: Vec<Vec<Link>>,
}

/// Builds the overlay of `t`: the root is the centroid of the whole tree, and each
/// component left by removing an anchor contributes its own centroid as a child.
pub fn build_overlay(t: &RootedTree) -> OverlayTree {
    let n = t.node_count();
    let mut member = vec![true; n];
    let mut parent = vec![None; n];
    let mut names: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut links: Vec<Vec<Link>> = vec![Vec::new(); n];
    let mut scratch = vec![0; n];

    let root = t.centroid_of(&t.component_order(t.root_index(), &member), &member);
    let mut queue = VecDeque::from([root]);
    while let Some(c) = queue.pop_front() {
        let order = t.component_order(c, &member);
        scratch[c] = 0;
        links[c].push(Link { flag: Flag::Root, parent: c, m: 0 });
        for &(x, pred) in &order[1..] {
            let (flag, w) = if t.parent_index(x) == Some(pred) {
                (Flag::Up, t.parent_weight(x))
            } else {
                (Flag::Down, t.parent_weight(pred))
            };
            scratch[x] = scratch[pred].max(w);
            links[x].push(Link { flag, parent: pred, m: scratch[x] });
        }

        member[c] = false;
        let subs: Vec<(usize, usize)> = t
            .neighbors(c)
            .filter(|&y| member[y])
            .map(|y| {
                let sub = t.component_order(y, &member);
                (t.centroid_of(&sub, &member), sub.len())
            })
            .collect();
        let keyed: Vec<(NodeId, usize)> = subs.iter().map(|&(x, size)| (t.id(x), size)).collect();
        for (&(x, _), k) in subs.iter().zip(assign_numbers(&keyed)) {
            parent[x] = Some(c);
            let mut name = names[c].clone();
            name.push(k);
            names[x] = name;
            queue.push_back(x);
        }
    }
    OverlayTree { ids: t.ids().to_vec(), root, parent, names, links }
}

/// Numbers sibling components `1..=k` by decreasing size, ties by ascending centroid id.
/// Input is `(centroid, size)`; output is aligned with the input.
pub fn assign_numbers(children: &[(NodeId, usize)]) -> Vec<u32> {
    let mut by_rank: Vec<usize> = (0..children.len()).collect();
    by_rank.sort_unstable_by_key(|&i| (Reverse(children[i].1), children[i].0));
    let mut numbers = vec![0; children.len()];
    for (rank, i) in by_rank.into_iter().enumerate() {
        numbers[i] = rank as u32 + 1;
    }
    numbers
}

/// Concatenated gamma codes of the child numbers.
pub fn name_bits(name: &[u32]) -> BitString {
    let mut out = BitString::new();
    for &k in name {
        out.push_gamma(u64::from(k)).expect("child numbers are positive");
    }
    out
}

/// Depth of the nearest common overlay ancestor of two named nodes.
pub fn lcp_depth(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

impl OverlayTree {
    pub fn node_count(&self) -> usize {
        self.ids.len()
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

    /// Overlay depth `r`, equal to the name length.
    pub fn depth(&self, index: usize) -> usize {
        self.names[index].len()
    }

    /// Largest overlay depth over all nodes.
    pub fn height(&self) -> usize {
        self.names.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn overlay_parent(&self, index: usize) -> Option<usize> {
        self.parent[index]
    }

    pub fn name(&self, index: usize) -> &[u32] {
        &self.names[index]
    }

    /// Levels `0..=r`; the last one is the node's own.
    pub fn links(&self, index: usize) -> &[Link] {
        &self.links[index]
    }

    /// Overlay ancestors by depth, from the root down to the node itself.
    pub fn anchors(&self, index: usize) -> Vec<usize> {
        let mut chain = vec![index];
        while let Some(p) = self.parent[*chain.last().unwrap()] {
            chain.push(p);
        }
        chain.reverse();
        chain
    }

    /// `m_i = max_T(u, a_i)` for every node and level.
    pub fn max_table(&self) -> Vec<Vec<Weight>> {
        self.links.iter().map(|ls| ls.iter().map(|l| l.m).collect()).collect()
    }
}
