//! Permutations, the bubble-sort graph `B_n`, its canonical sixth `B'_n`, and
//! the structural checks run on them.

mod graph;
mod permutation;
pub mod planarity;

pub use graph::{
    build_bn, build_bn_with_limit, build_bprime, build_bprime_with_limit, build_class_subgraph,
    symmetry_classes, symmetry_classes_with_limit, CoreSubgraph, LabeledGraph, SymmetryClass,
    SymmetryReport, DEFAULT_MAX_N, HARD_MAX_N,
};
pub use permutation::{factorial, inversions, PatternClass, Permutation, MAX_RANKABLE_N};
