//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input to a special function outside its domain (log of 0, rogers at 0 or 1, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Four boundary points that do not span a non-degenerate ideal simplex.
    #[error("degenerate simplex: {0}")]
    Degenerate(String),

    /// A FlatTriple that is not ell(z;p,q) for any cover point.
    #[error("invalid flattening triple: {0}")]
    InvalidTriple(String),

    /// Malformed tri-json document or inconsistent gluing data.
    #[error("parse error: {0}")]
    Parse(String),

    /// A face gluing whose induced vertex map is not monotonic.
    #[error("order-incompatible gluing: tet {tet} face {face}: {detail}")]
    OrderIncompatible {
        tet: usize,
        face: usize,
        detail: String,
    },

    /// Newton iteration failed to converge or hit a degenerate shape.
    #[error("solver failure: {0}")]
    Solver(String),

    /// Integer flattening system inconsistent or residues non-integral.
    #[error("flattening failure: {0}")]
    Flattening(String),

    /// Integer linear system with no solution over Z (or F2).
    #[error("no integer solution")]
    NoSolution,

    /// Homogeneous chain whose boundary faces do not cancel in pairs.
    #[error("not a cycle: {0}")]
    NotACycle(String),

    /// Requested operation unsupported for this input (real shapes, wrong valence, ...).
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
