//! Seeded random instances: a spanning tree of a chosen shape, extra edges, and the
//! Kruskal MST as the selection.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Edge, NodeId, Weight, WeightedGraph, MAX_WEIGHT};
use crate::mst::kruskal_mst;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("node count must be at least 1")]
    NoNodes,
    #[error("maximum weight must be in [1, {MAX_WEIGHT}], got {0}")]
    BadWeight(Weight),
    #[error("density must be in [0, 1], got {0}")]
    BadDensity(f64),
    #[error("node count {0} exceeds the id space")]
    TooManyNodes(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TreeShape {
    /// Node `i` attaches to a uniform earlier node.
    RandomRecursive,
    /// Uniform labelled tree via a random Prüfer sequence.
    Pruefer,
    Path,
    Star,
    /// A spine of half the nodes with the rest hung on random spine nodes.
    Caterpillar,
}

impl TreeShape {
    pub const ALL: [TreeShape; 5] =
        [TreeShape::RandomRecursive, TreeShape::Pruefer, TreeShape::Path, TreeShape::Star, TreeShape::Caterpillar];
}

/// Tree edges over positions `0..n`.
fn tree_pairs(n: usize, shape: TreeShape, rng: &mut impl Rng) -> Vec<(usize, usize)> {
    match shape {
        _ if n < 2 => Vec::new(),
        TreeShape::RandomRecursive => (1..n).map(|i| (rng.gen_range(0..i), i)).collect(),
        TreeShape::Path => (1..n).map(|i| (i - 1, i)).collect(),
        TreeShape::Star => (1..n).map(|i| (0, i)).collect(),
        TreeShape::Caterpillar => {
            let spine = n.div_ceil(2);
            (1..n).map(|i| if i < spine { (i - 1, i) } else { (rng.gen_range(0..spine), i) }).collect()
        }
        TreeShape::Pruefer => {
            if n == 2 {
                return vec![(0, 1)];
            }
            let code: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
            let mut degree = vec![1usize; n];
            for &c in &code {
                degree[c] += 1;
            }
            let mut leaves: BinaryHeap<Reverse<usize>> = (0..n).filter(|&x| degree[x] == 1).map(Reverse).collect();
            let mut pairs = Vec::with_capacity(n - 1);
            for &c in &code {
                let Reverse(leaf) = leaves.pop().unwrap();
                pairs.push((leaf, c));
                degree[c] -= 1;
                if degree[c] == 1 {
                    leaves.push(Reverse(c));
                }
            }
            let Reverse(a) = leaves.pop().unwrap();
            let Reverse(b) = leaves.pop().unwrap();
            pairs.push((a, b));
            pairs
        }
    }
}

fn random_ids(n: usize, rng: &mut impl Rng) -> Vec<NodeId> {
    let mut ids: Vec<NodeId> = (1..=n as NodeId).collect();
    ids.shuffle(rng);
    ids
}

/// Assembles the graph and selects its Kruskal MST.
fn finish(
    ids: &[NodeId],
    pairs: impl IntoIterator<Item = (usize, usize)>,
    max_w: Weight,
    rng: &mut impl Rng,
) -> WeightedGraph {
    let edges: Vec<Edge> =
        pairs.into_iter().map(|(a, b)| Edge::new(ids[a], ids[b], rng.gen_range(1..=max_w), false)).collect();
    let g = WeightedGraph::new(ids.iter().copied(), edges).expect("generated graphs are simple");
    let mst = kruskal_mst(&g).expect("generated graphs are connected");
    g.with_selection(&mst)
}

/// A tree instance: every edge is selected.
pub fn random_tree(n: usize, max_w: Weight, shape: TreeShape, rng: &mut impl Rng) -> WeightedGraph {
    random_instance(n, 0, max_w, shape, rng)
}

/// Spanning tree of the given shape plus up to `extra` further random edges.
pub fn random_instance(n: usize, extra: usize, max_w: Weight, shape: TreeShape, rng: &mut impl Rng) -> WeightedGraph {
    let ids = random_ids(n, rng);
    let mut pairs = tree_pairs(n, shape, rng);
    add_edges(n, &mut pairs, extra, rng);
    finish(&ids, pairs, max_w, rng)
}

/// Adds up to `extra` distinct non-adjacent pairs.
fn add_edges(n: usize, pairs: &mut Vec<(usize, usize)>, extra: usize, rng: &mut impl Rng) {
    let all = n * n.saturating_sub(1) / 2;
    let extra = extra.min(all - pairs.len());
    let mut present: HashSet<(usize, usize)> = pairs.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    if 2 * (pairs.len() + extra) <= all {
        while present.len() < pairs.len() + extra {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if a != b {
                present.insert((a.min(b), a.max(b)));
            }
        }
        let tree: HashSet<(usize, usize)> = pairs.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        let mut added: Vec<(usize, usize)> = present.difference(&tree).copied().collect();
        added.sort_unstable();
        pairs.extend(added);
    } else {
        let mut free: Vec<(usize, usize)> =
            (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|p| !present.contains(p)).collect();
        free.shuffle(rng);
        free.truncate(extra);
        free.sort_unstable();
        pairs.extend(free);
    }
}

/// Connected instance with `max(n - 1, round(density * n(n-1)/2))` edges and its
/// Kruskal MST selected. Deterministic in `seed`.
pub fn gen_instance(n: usize, max_w: Weight, density: f64, seed: u64) -> Result<WeightedGraph, GenError> {
    if n == 0 {
        return Err(GenError::NoNodes);
    }
    if n > NodeId::MAX as usize {
        return Err(GenError::TooManyNodes(n));
    }
    if max_w == 0 || max_w > MAX_WEIGHT {
        return Err(GenError::BadWeight(max_w));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(GenError::BadDensity(density));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all = n * (n - 1) / 2;
    let target = ((density * all as f64).round() as usize).max(n - 1);
    Ok(random_instance(n, target - (n - 1), max_w, TreeShape::RandomRecursive, &mut rng))
}

/// Renames node ids through `map`, keeping weights and selection.
pub fn relabel(g: &WeightedGraph, map: impl Fn(NodeId) -> NodeId) -> WeightedGraph {
    let edges: Vec<Edge> = g.edges().iter().map(|e| Edge::new(map(e.u), map(e.v), e.w, e.selected)).collect();
    WeightedGraph::new(g.ids().iter().map(|&id| map(id)), edges).expect("relabelling is injective")
}
