use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension {n} out of range [{min}, {max}]")]
    DimensionOutOfRange { n: usize, min: usize, max: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("degenerate slope assignment: families {first} and {second} share slope {slope} on one side")]
    DegenerateSlopes {
        first: usize,
        second: usize,
        slope: i64,
    },

    #[error("no closed-form maximum for mesh (n = {n}, a = {a})")]
    UnsupportedMeshCase { n: usize, a: usize },

    #[error("exhaustive enumeration over permutations of {{2..{}}} exceeds the limit n <= {max}", .n - 1)]
    EnumerationGuard { n: usize, max: usize },

    #[error("vertex state (l = {l}, r = {r}) is outside the parity classes for n = {n}")]
    StateOutsideParity { n: usize, l: u32, r: u32 },

    #[error("inconsistent replacement plan: {0}")]
    InconsistentPlan(String),

    #[error("expected {expected} n, got n = {n}")]
    Parity { n: usize, expected: &'static str },

    #[error("non-integer value: {0}")]
    NonInteger(String),

    #[error("bound computations diverge at n = {n}")]
    TripleMismatch { n: usize },

    #[error("invariant violated: {0}")]
    Invariant(String),
}
