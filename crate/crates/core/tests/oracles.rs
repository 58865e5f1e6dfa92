mod common;

use common::{connected_graphs, path_maximum, random_graph, spanning_trees, tree_path, weight_of, weighted};
use mstcert::{check_cycle_property, is_spanning_tree, kruskal_mst, root_at, EdgeSet};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn connected_graph_counts() {
    let counts: Vec<usize> = (1..=6).map(|n| connected_graphs(n).len()).collect();
    assert_eq!(counts, vec![1, 1, 2, 6, 21, 112]);
}

#[test]
fn cycle_property_theorem_small_exhaustive() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 1..=5 {
        for edges in connected_graphs(n) {
            for _ in 0..10 {
                let weights: Vec<u64> = edges.iter().map(|_| rng.gen_range(1..=4)).collect();
                let g = weighted(n, edges, &weights);
                let trees = spanning_trees(&g);
                let best = trees.iter().map(|t| weight_of(&g, t)).min().unwrap();
                for t in &trees {
                    assert_eq!(check_cycle_property(&g, t).unwrap(), weight_of(&g, t) == best);
                }
            }
        }
    }
}

#[test]
fn cycle_property_theorem_seven_nodes() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let w = rng.gen_range(1..=8);
        let g = random_graph(&mut rng, 7, w);
        let trees = spanning_trees(&g);
        let best = trees.iter().map(|t| weight_of(&g, t)).min().unwrap();
        for t in &trees {
            assert_eq!(check_cycle_property(&g, t).unwrap(), weight_of(&g, t) == best);
        }
    }
}

#[test]
fn four_cycle_tie_break() {
    let g = weighted(4, &[(0, 1), (1, 2), (2, 3), (0, 3)], &[1, 1, 1, 1]);
    assert_eq!(spanning_trees(&g).len(), 4);
    assert_eq!(kruskal_mst(&g).unwrap(), EdgeSet::from([(1, 2), (1, 4), (2, 3)]));
}

proptest! {
    #[test]
    fn kruskal_output_is_minimal(n in 1usize..40, w in 1u64..20, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, n, w);
        let t = kruskal_mst(&g).unwrap();
        prop_assert!(is_spanning_tree(&g, &t));
        prop_assert!(check_cycle_property(&g, &t).unwrap());
    }

    #[test]
    fn path_max_matches_search_and_is_symmetric(n in 1usize..30, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, n, 50);
        let sel = g.selected_edges();
        let t = root_at(&g, &sel, g.ids()[rng.gen_range(0..n)]).unwrap();
        for &u in g.ids() {
            for &v in g.ids() {
                let m = t.path_max(u, v).unwrap();
                prop_assert_eq!(m, t.path_max(v, u).unwrap());
                prop_assert_eq!(m, path_maximum(&g, &sel, u, v));
                let walked: Vec<_> = t.path(t.index_of(u).unwrap(), t.index_of(v).unwrap()).into_iter().map(|i| t.id(i)).collect();
                prop_assert_eq!(walked, tree_path(&g, &sel, u, v));
            }
        }
    }

    #[test]
    fn root_at_is_consistent(n in 1usize..50, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, n, 9);
        let sel = g.selected_edges();
        let root = g.ids()[rng.gen_range(0..n)];
        let t = root_at(&g, &sel, root).unwrap();
        prop_assert_eq!(t.root(), root);
        prop_assert_eq!(t.depth(root), Some(0));
        let mut parent_edges = EdgeSet::new();
        for &v in g.ids().iter().filter(|&&v| v != root) {
            let p = t.parent(v).unwrap();
            prop_assert_eq!(t.depth(v).unwrap(), t.depth(p).unwrap() + 1);
            parent_edges.insert(mstcert::graph::ordered(v, p));
        }
        prop_assert_eq!(parent_edges, sel);
    }

    #[test]
    fn centroid_halves_components(n in 1usize..60, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, n, 9);
        let sel = g.selected_edges();
        let t = root_at(&g, &sel, g.ids()[0]).unwrap();
        let c = t.centroid(g.ids()).unwrap();
        let rest: EdgeSet = sel.iter().copied().filter(|&(a, b)| a != c && b != c).collect();
        for &v in g.ids().iter().filter(|&&v| v != c) {
            let size = g.ids().iter().filter(|&&x| x != c && (x == v || reachable(&g, &rest, v, x))).count();
            prop_assert!(size <= n / 2);
        }
    }
}

fn reachable(g: &mstcert::WeightedGraph, edges: &EdgeSet, a: u32, b: u32) -> bool {
    let mut seen = vec![a];
    let mut k = 0;
    while k < seen.len() {
        let x = seen[k];
        k += 1;
        for e in g.edges().iter().filter(|e| edges.contains(&e.ends()) && (e.u == x || e.v == x)) {
            let y = e.other(x);
            if !seen.contains(&y) {
                seen.push(y);
            }
        }
    }
    seen.contains(&b)
}
