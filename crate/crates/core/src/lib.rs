//! Directed hypergraphs, B-connectivity and polynomial-delay enumeration of
//! S-T hyperpaths in B-hypergraphs, plus brute-force oracles and the
//! hardness constructions for the neighbouring problems.

#![forbid(unsafe_code)]

pub mod connectivity;
pub mod enumerator;
pub mod families;
pub mod hypergraph;
pub mod io;
pub mod oracles;
pub mod reductions;

pub use connectivity::{
    b_connected_set, diagnose_hyperpath, find_minimal_hyperpath, is_b_connected, layered_order,
    verify_hyperpath, ConnectivityError, Hyperpath, HyperpathDefect, HyperpathInstance,
};
pub use enumerator::{
    all_hyperpaths, contract, enumerate_hyperpaths, enumerate_two_terminal, ContractionResult,
    Emission, EnumerationError, EnumerationStats,
};
pub use hypergraph::{
    ArcId, DirectedHypergraph, Hyperarc, HypergraphBuilder, HypergraphClass, HypergraphError, Side,
    Subhypergraph, Vertex, VertexId,
};
pub use oracles::{OracleError, UndirectedHypergraph, DEFAULT_CAP};
pub use reductions::{Assignment, CnfFormula, Literal, ReductionError};
