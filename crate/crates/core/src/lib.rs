//! Exact computation of chromatic symmetric and chromatic k-multisymmetric
//! functions of tuple-weighted graphs.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is pure: values
//! are immutable after construction and every operation returns fresh data.
//!
//! Layout:
//!
//! * [`partitions`]: k-tuples, k-tuple partitions, canonical order, enumeration.
//! * [`multisym`]: sparse exact elements of the multisymmetric ring and basis changes.
//! * [`graphs`]: tuple-weighted multigraphs, isomorphism, homogeneity.
//! * [`csf`]: three independent algorithms for the chromatic function.
//! * [`kernel`]: formal graph combinations, generator relations, kernel certificates.
//! * [`posets`]: posets, incomparability graphs and the homogeneous-pair reduction.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod csf;
mod error;
pub mod graphs;
pub mod kernel;
mod linalg;
pub mod multisym;
pub mod partitions;
pub mod posets;

pub use error::Error;

/// Version of this library.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Exact rational coefficient used everywhere.
pub type Rational = num_rational::BigRational;

/// Resource bounds. Exceeding any of them is reported as [`Error::LimitExceeded`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest `norm` of a graded component that may be enumerated.
    pub partition_norm: u32,
    /// Vertex bound for set-partition (coloring) enumeration.
    pub coloring_vertices: usize,
    /// Edge bound for the signed edge-subset expansion.
    pub subset_edges: usize,
    /// Vertex bound for canonical labelling.
    pub canon_vertices: usize,
    /// Vertex bound for kernel rewriting.
    pub rewrite_vertices: usize,
    /// Bound on the number of maps enumerated for reduction coefficients.
    pub gp_maps: u64,
    /// Bound on each side of a homogeneous pair.
    pub pair_side: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            partition_norm: 12,
            coloring_vertices: 10,
            subset_edges: 16,
            canon_vertices: 10,
            rewrite_vertices: 8,
            gp_maps: 1_000_000,
            pair_side: 12,
        }
    }
}

pub(crate) fn check_limit(what: &'static str, actual: u64, limit: u64) -> Result<()> {
    if actual > limit {
        Err(Error::LimitExceeded { what, actual, limit })
    } else {
        Ok(())
    }
}
