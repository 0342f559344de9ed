//! Qubit routing for quantum circuits on restricted architectures.
//!
//! The crate inserts SWAP gates so that every two-qubit gate of a circuit acts
//! on an edge of an architecture graph. Permuters turn a partial permutation
//! of vertices into a schedule of matchings; mappers pick where the next gates
//! should run; transforms drive the two over a whole circuit.

pub mod circuit;
pub mod cli;
pub mod error;
pub mod graph;
pub mod harness;
pub mod mappers;
pub mod matching;
pub mod perm;
pub mod permuters;
pub mod transforms;

pub use error::{Error, Result};
pub use graph::{
    parse_arch_spec, parse_hierarchical, ArchKind, ArchitectureGraph, DistanceMatrix,
    HierarchicalSpec,
};
pub use matching::{max_bipartite_matching, min_weight_perfect_matching, WeightedBipartiteGraph};
pub use perm::PartialPermutation;
