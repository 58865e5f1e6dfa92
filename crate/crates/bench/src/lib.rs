//! Fixed instances shared by the benchmarks.

use mstcert::gen::gen_instance;
use mstcert::{Weight, WeightedGraph};

/// Node counts the benchmarks sweep over.
pub const SIZES: [usize; 3] = [64, 256, 1024];

/// Sparse connected instance with about `3n` edges and its MST selected.
pub fn instance(n: usize, max_w: Weight, seed: u64) -> WeightedGraph {
    let pairs = (n * (n - 1) / 2).max(1) as f64;
    let density = ((3 * n) as f64 / pairs).min(1.0);
    gen_instance(n, max_w, density, seed).expect("valid parameters")
}
