//! Brute-force oracles and instance builders shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::OnceLock;

use mstcert::gen::{random_instance, TreeShape};
use mstcert::{Edge, EdgeSet, NodeId, Weight, WeightedGraph};
use rand::seq::SliceRandom;
use rand::Rng;

/// All node pairs of `0..n`, in lexicographic order.
fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn mask_connected(n: usize, all: &[(usize, usize)], mask: u32) -> bool {
    let mut seen = 1u32;
    let mut grew = true;
    while grew {
        grew = false;
        for (k, &(a, b)) in all.iter().enumerate() {
            if mask >> k & 1 == 1 && ((seen >> a & 1) ^ (seen >> b & 1)) == 1 {
                seen |= 1 << a | 1 << b;
                grew = true;
            }
        }
    }
    seen == (1u32 << n) - 1
}

type EdgeList = Vec<(usize, usize)>;

/// One representative edge list over `0..n` per isomorphism class of connected graphs.
pub fn connected_graphs(n: usize) -> &'static [EdgeList] {
    static CACHE: OnceLock<Vec<Vec<EdgeList>>> = OnceLock::new();
    &CACHE.get_or_init(|| (0..=6).map(enumerate_connected).collect())[n]
}

fn enumerate_connected(n: usize) -> Vec<Vec<(usize, usize)>> {
    if n == 0 {
        return Vec::new();
    }
    let all = pairs(n);
    let index: HashMap<(usize, usize), usize> = all.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let maps: Vec<Vec<usize>> = permutations(n)
        .into_iter()
        .map(|p| all.iter().map(|&(a, b)| index[&(p[a].min(p[b]), p[a].max(p[b]))]).collect())
        .collect();
    let mut classes = BTreeSet::new();
    for mask in 0u32..1 << all.len() {
        if !mask_connected(n, &all, mask) {
            continue;
        }
        let canon = maps
            .iter()
            .map(|m| (0..all.len()).filter(|&k| mask >> k & 1 == 1).fold(0u32, |acc, k| acc | 1 << m[k]))
            .min()
            .unwrap();
        classes.insert(canon);
    }
    classes.into_iter().map(|mask| (0..all.len()).filter(|&k| mask >> k & 1 == 1).map(|k| all[k]).collect()).collect()
}

/// Graph over ids `1..=n` with the given weights and nothing selected.
pub fn weighted(n: usize, edges: &[(usize, usize)], weights: &[Weight]) -> WeightedGraph {
    let list: Vec<Edge> =
        edges.iter().zip(weights).map(|(&(a, b), &w)| Edge::new(a as NodeId + 1, b as NodeId + 1, w, false)).collect();
    WeightedGraph::new(1..=n as NodeId, list).unwrap()
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Every spanning tree of `g`, by trying all `(n - 1)`-subsets of edges.
pub fn spanning_trees(g: &WeightedGraph) -> Vec<EdgeSet> {
    let n = g.node_count();
    let edges = g.edges();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fn rec(
        g: &WeightedGraph,
        edges: &[Edge],
        start: usize,
        need: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<EdgeSet>,
    ) {
        if need == 0 {
            let mut parent: Vec<usize> = (0..g.node_count()).collect();
            for &k in chosen.iter() {
                let (a, b) = (g.index_of(edges[k].u).unwrap(), g.index_of(edges[k].v).unwrap());
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra == rb {
                    return;
                }
                parent[ra] = rb;
            }
            out.push(chosen.iter().map(|&k| edges[k].ends()).collect());
            return;
        }
        for k in start..edges.len() {
            if edges.len() - k < need {
                break;
            }
            chosen.push(k);
            rec(g, edges, k + 1, need - 1, chosen, out);
            chosen.pop();
        }
    }
    rec(g, edges, 0, n.saturating_sub(1), &mut chosen, &mut out);
    out
}

pub fn weight_of(g: &WeightedGraph, tree: &EdgeSet) -> Weight {
    tree.iter().map(|&(a, b)| g.edge(a, b).unwrap().w).sum()
}

/// Node ids on the path from `u` to `v` through the edges of `tree`, by breadth-first search.
pub fn tree_path(g: &WeightedGraph, tree: &EdgeSet, u: NodeId, v: NodeId) -> Vec<NodeId> {
    let mut prev: HashMap<NodeId, NodeId> = HashMap::from([(u, u)]);
    let mut queue = VecDeque::from([u]);
    while let Some(x) = queue.pop_front() {
        for e in g.edges().iter().filter(|e| (e.u == x || e.v == x) && tree.contains(&e.ends())) {
            let y = e.other(x);
            if let std::collections::hash_map::Entry::Vacant(e) = prev.entry(y) {
                e.insert(x);
                queue.push_back(y);
            }
        }
    }
    let mut path = vec![v];
    while *path.last().unwrap() != u {
        path.push(prev[path.last().unwrap()]);
    }
    path.reverse();
    path
}

pub fn path_maximum(g: &WeightedGraph, tree: &EdgeSet, u: NodeId, v: NodeId) -> Weight {
    tree_path(g, tree, u, v).windows(2).map(|p| g.edge(p[0], p[1]).unwrap().w).max().unwrap_or(0)
}

/// Random connected instance with its Kruskal MST selected.
pub fn random_graph(rng: &mut impl Rng, n: usize, max_w: Weight) -> WeightedGraph {
    let shape = *TreeShape::ALL.choose(rng).unwrap();
    let extra = rng.gen_range(0..=2 * n);
    random_instance(n, extra, max_w, shape, rng)
}

pub const WEIGHT_CAPS: [Weight; 3] = [2, 1 << 8, 1 << 16];
