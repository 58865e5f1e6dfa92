//! Proof-labeling schemes for minimum spanning trees.
//!
//! A prover assigns every node a certificate; every node then checks its own
//! certificate against those of its neighbors and the weights and selection bits of
//! its incident edges. The selection is accepted when every node accepts.

pub mod any;
pub mod bits;
pub mod cert;
pub mod gen;
pub mod graph;
pub mod harness;
pub mod mst;
pub mod overlay;
pub mod schemes;
pub mod tree;

pub use bits::{gamma_decode, gamma_encode, BitReader, BitString, CodecError};
pub use cert::{
    run_round, CertDump, Certificate, DumpError, EncodingParams, FieldClass, FieldSpec, Incident, LabelAssignment,
    LocalView, ProveError, ProveMode, Reason, Scheme, SchemeTag, TamperError, Verdict, VerdictReport,
};
pub use graph::{parse_graph, Edge, EdgeSet, GraphError, NodeId, Weight, WeightedGraph, MAX_WEIGHT};
pub use harness::{mutate_instance, MutateError, MutationKind};
pub use mst::{check_cycle_property, is_mst, is_spanning_tree, kruskal_mst, MstError};
pub use overlay::{build_overlay, lcp_depth, name_bits, Flag, OverlayTree};
pub use schemes::ancestors::{AncestorsCert, AncestorsScheme};
pub use schemes::boruvka::{BoruvkaCert, BoruvkaScheme};
pub use schemes::kk::{KkCert, KkScheme};
pub use schemes::kruskal::{KruskalCert, KruskalScheme};
pub use schemes::st::{StCert, StScheme};
pub use schemes::universal::{UniversalCert, UniversalScheme};
pub use tree::{root_at, RootedTree, TreeError};
