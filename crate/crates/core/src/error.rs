//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An exponent vector failed a structural requirement.
    #[error("invalid exponent vector {vector:?}: {reason}")]
    InvalidExponentVector { vector: [i64; 3], reason: String },

    /// A partition failed a structural requirement.
    #[error("invalid partition {parts:?}: {reason}")]
    InvalidPartition { parts: Vec<u32>, reason: String },

    /// Partition indices start at 1.
    #[error("partition index {0} is out of range (indices start at 1)")]
    InvalidIndex(usize),

    /// A parameter was outside its documented range.
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The system has no solution at the requested truncation level.
    #[error(
        "no matching pair exists with the first {k} shapes; \
         try `min-k` to locate the smallest feasible truncation"
    )]
    InfeasibleAtK { k: usize },

    /// A point claimed to lie in a polytope does not.
    #[error("point does not satisfy the system: {0}")]
    PointNotFeasible(String),

    /// Search work exceeded the configured budget.
    #[error("budget exceeded after {nodes} nodes (limit {limit})")]
    BudgetExceeded { nodes: u64, limit: u64 },

    /// The pivoting loop exceeded its safety bound; this indicates a bug
    /// rather than a hard instance, so it is surfaced loudly.
    #[error("linear-program solver exceeded {0} pivots; this is a bug")]
    PivotLimit(u64),

    /// A certificate could not be interpreted at all (as opposed to a
    /// certificate that parses but fails verification).
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),

    /// The implicitization resultant vanished identically.
    #[error("resultant vanished identically for {vector:?}; the two coordinate functions are dependent")]
    DegenerateResultant { vector: [i64; 3] },

    /// The lattice enumeration cap was smaller than the smallest solution.
    #[error("enumeration cap {cap} admits no points: {reason}")]
    CapTooSmall { cap: u64, reason: String },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}
