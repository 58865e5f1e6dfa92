mod common;

use std::collections::BTreeMap;

use common::random_graph;
use mstcert::{
    BoruvkaScheme, Certificate, EncodingParams, Incident, KkScheme, LabelAssignment, LocalView, NodeId, ProveMode,
    Scheme, Verdict, WeightedGraph,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Evaluates every node's verifier one at a time, in the given order.
fn sequential<S: Scheme>(
    g: &WeightedGraph,
    labels: &LabelAssignment<S::Cert>,
    order: &[NodeId],
) -> BTreeMap<NodeId, Verdict> {
    let params = EncodingParams::for_graph(g);
    order
        .iter()
        .map(|&id| {
            let mut incident: Vec<Incident<'_, S::Cert>> = g
                .edges()
                .iter()
                .filter(|e| e.u == id || e.v == id)
                .map(|e| {
                    let nb = e.other(id);
                    Incident { neighbor: nb, weight: e.w, selected: e.selected, cert: labels.get(nb).unwrap() }
                })
                .collect();
            incident.sort_by_key(|i| i.neighbor);
            let view = LocalView { params: &params, id, cert: labels.get(id).unwrap(), incident };
            (id, S::verify(&view))
        })
        .collect()
}

fn check<S: Scheme>(seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..50 {
        let n = rng.gen_range(2..40);
        let g = random_graph(&mut rng, n, 30);
        let honest = S::prove(&g, ProveMode::Strict).unwrap();
        let id = g.ids()[rng.gen_range(0..n)];
        let fields = honest.get(id).unwrap().fields();
        let spec = fields.choose(&mut rng).unwrap();
        let old = honest.get(id).unwrap().field(&spec.name).unwrap();
        let labels = honest.tamper(id, &spec.name, old ^ 1).unwrap_or(honest);
        let report = S::run(&g, &labels);
        let mut order = g.ids().to_vec();
        order.shuffle(&mut rng);
        let seq = sequential::<S>(&g, &labels, &order);
        assert_eq!(report.verdicts, seq);
        assert_eq!(report.accepted, seq.values().all(Verdict::accepted));
    }
}

#[test]
fn round_matches_sequential_evaluation_in_any_order() {
    check::<KkScheme>(1);
    check::<BoruvkaScheme>(2);
}
