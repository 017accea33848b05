//! Constructive crossing-number upper bounds for bubble-sort graphs.
//!
//! * [`perm_graph`] builds `B_n` and `B'_n` and runs the structural checks.
//! * [`mesh`] counts crossings in the semi-line mesh `M_{n,a}`, with a
//!   coordinate-geometry oracle alongside the closed formulas.
//! * [`recursion`] tracks left/right arc counts through the recursive drawing.
//! * [`bounds`] evaluates the crossing-count recurrences and closed forms exactly.
//! * [`export`] renders graphs, meshes, traces and bound tables.

pub mod bounds;
pub mod error;
pub mod export;
pub mod mesh;
pub mod perm_graph;
pub mod recursion;
pub mod verify;

pub use error::{Error, Result};
