use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two values carry different `k`.
    KMismatch { expected: usize, found: usize },
    /// Arithmetic between different bases, or an operation requiring a specific basis.
    BasisMismatch,
    /// A configured resource bound was exceeded.
    LimitExceeded { what: &'static str, actual: u64, limit: u64 },
    /// Structurally invalid input (zero tuple, bad partition, malformed graph...).
    Invalid(String),
    /// A vertex id that does not exist in the graph.
    UnknownVertex(String),
    /// The edge to delete or contract is not present.
    MissingEdge(String, String),
    /// The operation needs a loopless graph without multi-edges.
    NotSimple,
    /// A hypothesis of a construction does not hold.
    Hypothesis(String),
    /// The input poset contains an induced (3+1); the four witnesses are `a < b < c`, `d`.
    ContainsThreePlusOne([String; 4]),
    /// Two independent routes disagreed. Always a bug.
    Inconsistent(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::KMismatch { expected, found } => {
                write!(f, "k mismatch: expected {expected}, found {found}")
            }
            Error::BasisMismatch => f.write_str("basis mismatch"),
            Error::LimitExceeded { what, actual, limit } => {
                write!(f, "resource limit exceeded: {what} is {actual}, limit {limit}")
            }
            Error::Invalid(msg) => write!(f, "invalid input: {msg}"),
            Error::UnknownVertex(v) => write!(f, "unknown vertex `{v}`"),
            Error::MissingEdge(a, b) => write!(f, "edge {{{a}, {b}}} not present"),
            Error::NotSimple => f.write_str("graph has loops or multi-edges"),
            Error::Hypothesis(msg) => write!(f, "hypothesis violated: {msg}"),
            Error::ContainsThreePlusOne([a, b, c, d]) => {
                write!(f, "poset contains an induced (3+1): {a} < {b} < {c}, {d} incomparable")
            }
            Error::Inconsistent(msg) => write!(f, "internal consistency failure: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
