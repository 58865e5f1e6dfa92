mod common;

use common::random_graph;
use mstcert::gen::gen_instance;
use mstcert::{
    parse_graph, AncestorsScheme, BoruvkaScheme, Certificate, EncodingParams, KruskalScheme, ProveMode, Scheme,
    UniversalScheme, WeightedGraph,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn max_bits<S: Scheme>(g: &WeightedGraph) -> usize {
    let params = EncodingParams::for_graph(g);
    S::prove(g, ProveMode::Strict).unwrap().iter().map(|(_, c)| c.encoded_len(&params)).max().unwrap()
}

fn path(n: u32) -> WeightedGraph {
    let text: String =
        std::iter::once(format!("{n} {}\n", n - 1)).chain((1..n).map(|i| format!("{} {} 3 1\n", i, i + 1))).collect();
    parse_graph(&text).unwrap()
}

fn ratios(sizes: &[usize]) -> Vec<f64> {
    sizes.windows(2).map(|p| p[1] as f64 / p[0] as f64).collect()
}

#[test]
fn universal_quadruples_per_doubling() {
    let sizes: Vec<usize> =
        [8, 16, 32].iter().map(|&n| max_bits::<UniversalScheme>(&gen_instance(n, 1 << 8, 0.3, 1).unwrap())).collect();
    for r in ratios(&sizes) {
        assert!((3.2..=4.8).contains(&r), "{sizes:?}");
    }
}

#[test]
fn kruskal_doubles_per_doubling() {
    let sizes: Vec<usize> = [64, 128, 256]
        .iter()
        .map(|&n| max_bits::<KruskalScheme>(&gen_instance(n, 1 << 16, 0.05, 2).unwrap()))
        .collect();
    for r in ratios(&sizes) {
        assert!((1.8..=2.4).contains(&r), "{sizes:?}");
    }
}

#[test]
fn ancestors_grow_linearly_on_a_path() {
    let sizes: Vec<usize> = [64, 128, 256].iter().map(|&n| max_bits::<AncestorsScheme>(&path(n))).collect();
    for r in ratios(&sizes) {
        assert!((1.8..=2.3).contains(&r), "{sizes:?}");
    }
}

#[test]
fn boruvka_grows_like_log_squared_at_small_weights() {
    let ns = [16usize, 64, 256, 1024];
    let scaled: Vec<f64> = ns
        .iter()
        .map(|&n| {
            let g = gen_instance(n, 2, 4.0 / n as f64, 3).unwrap();
            max_bits::<BoruvkaScheme>(&g) as f64 / (n as f64).log2().powi(2)
        })
        .collect();
    let (lo, hi) = scaled.iter().fold((f64::MAX, 0.0f64), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    assert!(hi / lo <= 2.0, "{scaled:?}");
}

#[test]
fn boruvka_phase_count_is_logarithmic() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..200 {
        let n = rng.gen_range(1..=256);
        let w = rng.gen_range(1..=1000);
        let g = random_graph(&mut rng, n, w);
        let bound = (n as f64).log2().ceil() as usize + 1;
        for (_, c) in BoruvkaScheme::prove(&g, ProveMode::Strict).unwrap().iter() {
            assert!(c.phases.len() <= bound, "n={n} F={}", c.phases.len());
        }
    }
}
