//! Counting complex realizations of minimally rigid graphs on the sphere,
//! up to rotations.
//!
//! The count is computed recursively: split the graph into two calligraphs
//! sharing one edge and one further vertex, attach an integer class triple
//! to each side, and multiply the triples under a fixed quadratic form.
//! Classes are in turn computed by gluing small gadgets onto a calligraph
//! and counting the resulting rigid graphs. Graphs that admit no usable
//! split are counted numerically by homotopy continuation on the gauge-fixed
//! realization system.
//!
//! Entry points:
//! * [`engine::Engine::count_realizations`] for the full recursion,
//! * [`engine::Engine::s2_class`] for class triples of marked calligraphs,
//! * [`solver::fallback_count`] for direct numerical counting,
//! * [`rigidity`] for the combinatorial rigidity tests.

pub mod cache;
pub mod calligraph;
pub mod canon;
pub mod class;
pub mod corpus;
pub mod engine;
pub mod formats;
pub mod graph;
pub mod rigidity;
pub mod solver;
pub mod split;

pub use cache::{CacheStats, CacheStore, Provenance};
pub use calligraph::{basic_c, basic_l, basic_r, Gadget, MarkedCalligraph};
pub use canon::{canonical_key, CanonicalKey, Pinning};
pub use class::{quad_form, S2Class, CLASS_C, CLASS_L, CLASS_R};
pub use engine::{CountMethod, CountOutcome, Engine, EngineConfig, EngineError};
pub use formats::{parse_doc, parse_graph, serialize_graph, Format, GraphDoc, Marks, ParseError};
pub use graph::{Graph, GraphError};
pub use rigidity::{brute_force_laman, is_minimally_rigid, is_rigid_spanning, is_tight_2_3};
pub use solver::{
    build_system, fallback_count, sample_lengths, CountCertificate, SolveError, SolverConfig,
    StartKind,
};
pub use split::{enumerate_splits, find_nontrivial_split, SplitCandidate, SplitConfig, SplitError};
