//! Packing trees `T_2, ..., T_k` edge-disjointly into host graphs.
//!
//! The crate covers graph and tree primitives, exact coloring, a
//! constructive packer for `k`-chromatic hosts and families with at most
//! three non-stars, an exhaustive search oracle, the minimum- and
//! average-degree packers, and an independent verifier.

pub mod coloring;
pub mod constructive;
pub mod degree;
pub mod graph;
pub mod packing;
pub mod search;
pub mod sweep;
pub mod tree;
pub mod verify;

pub use coloring::{ColoringError, OrderedColoring};
pub use constructive::{
    pack_constructive, CaseTag, ConstructiveOptions, PackError, Preprocess, ReductionPlan,
};
pub use graph::{Edge, Graph, GraphError};
pub use packing::{Embedding, Packing};
pub use search::{pack_exhaustive, SearchOptions, SearchOutcome, SearchResult};
pub use tree::{Tree, TreeError, TreeFamily};
pub use verify::{verify_packing, VerifyReport, Violation, ViolationKind};
