//! Continuous-time quantum walks generated by graph Laplacians.
//!
//! The walk on a weighted graph `G` is the unitary `U(t) = exp(-itL)` where
//! `L = D - A` is the Laplacian. This crate simulates the walk spectrally,
//! decides perfect and pretty-good transfer between pair states
//! `e_a - e_b`, and constructs new transfer-admitting graphs by perturbing
//! the edge weight between twin vertices.
//!
//! Modules:
//! - [`graph`]: weighted undirected graphs, twin detection, edge perturbation
//! - [`spectral`]: eigendecomposition and evaluation of `U(t)`
//! - [`transfer`]: transfer checks, time search, and certified constructions
//! - [`families`]: generators for the supported graph families
//! - [`json`]: the graph/certificate interchange formats
//!
//! ```
//! use pairwalk::families::complete_bipartite;
//! use pairwalk::graph::{PairState, Perturbation};
//! use pairwalk::transfer::{apply_lpst_preservation, check_pair_lpst};
//!
//! # fn main() -> pairwalk::Result<()> {
//! // the two degree-4 vertices of K_{2,4} are twins
//! let g = complete_bipartite(2, 4);
//! let src = PairState::new(0, 2)?;
//! let dst = PairState::new(1, 2)?;
//! let known = check_pair_lpst(&g, &src, &dst, std::f64::consts::FRAC_PI_2, 1e-9)?;
//! assert!(known.verdict);
//!
//! // alpha * tau = pi, so the transfer survives weighting the twin edge
//! let p = Perturbation::new(0, 1, 2.0)?;
//! let (perturbed, cert) = apply_lpst_preservation(&g, &p, &known)?;
//! assert!(cert.verdict && perturbed.weight(0, 1) == 2.0);
//! # Ok(())
//! # }
//! ```

// index loops mirror the matrix arithmetic they implement
#![allow(clippy::needless_range_loop)]

pub mod families;
pub mod graph;
pub mod json;
pub mod matrix;
pub mod spectral;
pub mod transfer;

pub use graph::{Graph, PairState, Perturbation};
pub use matrix::Matrix;
pub use spectral::{decompose, SpectralDecomposition};
pub use transfer::{SearchConfig, TransferCertificate};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("vertex {0} out of range for a graph on {1} vertices")]
    VertexOutOfRange(usize, usize),
    #[error("pair vertices must be distinct (got {0} twice)")]
    DegeneratePair(usize),
    #[error("self-loops are not allowed (vertex {0})")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0},{1}}}")]
    DuplicateEdge(usize, usize),
    #[error("vertices {0} and {1} are not twins")]
    NotTwins(usize, usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix entry ({0},{1}) breaks symmetry beyond tolerance")]
    NotSymmetric(usize, usize),
    #[error("eigensolver did not converge within {0} sweeps")]
    NoConvergence(usize),
    #[error("invalid search config: {0}")]
    InvalidConfig(String),
    #[error("invalid scan range: {0}")]
    InvalidRange(String),
    #[error("side condition violated: {0}")]
    ConditionViolated(String),
    #[error("pair incidence pattern not covered: {0}")]
    IncidencePattern(String),
    #[error("pair {{{0},{1}}} is not periodic at the requested time")]
    NotPeriodic(usize, usize),
    #[error("input certificate is not verified (verdict is false)")]
    UnverifiedCertificate,
    #[error("matching edges must be pairwise vertex-disjoint")]
    OverlappingMatching,
    #[error("target edge is not part of the matching")]
    TargetNotInMatching,
    #[error("graph must have at least {0} vertices")]
    TooSmall(usize),
    #[error("invalid circulant connection set: {0}")]
    InvalidConnectionSet(String),
    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),
    #[error("invalid graph json: {0}")]
    GraphFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
