//! Runtime dispatch over scheme tags.

use crate::cert::{
    CertDump, Certificate, DumpError, EncodingParams, FieldClass, ProveError, ProveMode, Scheme, SchemeTag,
    VerdictReport,
};
use crate::graph::WeightedGraph;
use crate::harness::{self, FieldReplaceReport, MutationKind, MutationOutcome};
use crate::schemes::ancestors::AncestorsScheme;
use crate::schemes::boruvka::BoruvkaScheme;
use crate::schemes::kk::KkScheme;
use crate::schemes::kruskal::KruskalScheme;
use crate::schemes::st::StScheme;
use crate::schemes::universal::UniversalScheme;

macro_rules! dispatch {
    ($tag:expr, $s:ident => $body:expr) => {
        match $tag {
            SchemeTag::St => {
                type $s = StScheme;
                $body
            }
            SchemeTag::Universal => {
                type $s = UniversalScheme;
                $body
            }
            SchemeTag::Kruskal => {
                type $s = KruskalScheme;
                $body
            }
            SchemeTag::Boruvka => {
                type $s = BoruvkaScheme;
                $body
            }
            SchemeTag::Ancestors => {
                type $s = AncestorsScheme;
                $body
            }
            SchemeTag::Kk => {
                type $s = KkScheme;
                $body
            }
        }
    };
}

/// Proves and encodes.
pub fn prove(tag: SchemeTag, g: &WeightedGraph, mode: ProveMode) -> Result<CertDump, ProveError> {
    dispatch!(tag, S => {
        let labels = S::prove(g, mode)?;
        Ok(CertDump::from_labels(tag, EncodingParams::for_graph(g), &labels))
    })
}

/// Proves and verifies in memory.
pub fn prove_and_run(tag: SchemeTag, g: &WeightedGraph, mode: ProveMode) -> Result<VerdictReport, ProveError> {
    dispatch!(tag, S => Ok(S::run(g, &S::prove(g, mode)?)))
}

/// Verifies an encoded dump with the scheme named in its header.
pub fn verify(g: &WeightedGraph, dump: &CertDump) -> Result<VerdictReport, DumpError> {
    dispatch!(dump.scheme, S => dump.verify::<S>(g))
}

/// Encoded size of every node's honest certificate, ascending by node id.
pub fn sizes(tag: SchemeTag, g: &WeightedGraph) -> Result<Vec<usize>, ProveError> {
    let params = EncodingParams::for_graph(g);
    dispatch!(tag, S => Ok(S::prove(g, ProveMode::Strict)?.iter().map(|(_, c)| c.encoded_len(&params)).collect()))
}

/// Field-replace experiment on the honest labels of `g`.
pub fn field_replace(
    tag: SchemeTag,
    g: &WeightedGraph,
    keep: impl Fn(FieldClass) -> bool,
    seed: u64,
) -> Result<FieldReplaceReport, ProveError> {
    dispatch!(tag, S => {
        let labels = S::prove(g, ProveMode::Strict)?;
        Ok(harness::field_replace::<S>(g, &labels, keep, seed))
    })
}

/// Mutates `g`, re-proves best-effort and verifies.
pub fn mutation_trial(tag: SchemeTag, g: &WeightedGraph, kind: MutationKind, seed: u64) -> MutationOutcome {
    dispatch!(tag, S => harness::mutation_trial::<S>(g, kind, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    #[test]
    fn every_scheme_round_trips_through_a_dump() {
        let g = parse_graph("4 5\n1 2 1 1\n2 3 2 1\n3 4 3 1\n1 4 5 0\n1 3 4 0").unwrap();
        for tag in SchemeTag::ALL {
            let dump = prove(tag, &g, ProveMode::Strict).unwrap();
            let parsed = CertDump::parse(&dump.to_text()).unwrap();
            assert_eq!(parsed, dump);
            let report = verify(&g, &parsed).unwrap();
            assert!(report.accepted, "{tag}");
            assert_eq!(report.max_bits, *sizes(tag, &g).unwrap().iter().max().unwrap());
        }
    }

    #[test]
    fn flipped_bit_is_rejected_or_malformed() {
        let g = parse_graph("3 3\n1 2 1 1\n2 3 2 1\n1 3 3 0").unwrap();
        for tag in SchemeTag::ALL {
            let mut dump = prove(tag, &g, ProveMode::Strict).unwrap();
            let (_, bits) = &mut dump.entries[1];
            let mut raw = bits.as_slice().to_vec();
            raw[0] = !raw[0];
            *bits = raw.into();
            assert!(!verify(&g, &dump).unwrap().accepted, "{tag}");
        }
    }
}
