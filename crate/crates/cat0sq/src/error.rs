//! Error type shared across the crate.

use thiserror::Error;

use crate::complex::ValidationReport;
use crate::ids::VertexId;

#[derive(Error, Debug)]
pub enum Error {
    /// The input text could not be parsed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// The complex failed validation; the report lists every violation.
    #[error("complex failed validation: {0}")]
    Invalid(ValidationReport),

    /// A named cell does not exist in the complex at hand.
    #[error("unknown cell `{0}`")]
    UnknownCell(String),

    /// An argument is outside the domain of the operation
    /// (e.g. a square coordinate outside [0,1], a nonpositive radius).
    #[error("domain error: {0}")]
    Domain(String),

    /// The complex is not nonpositively curved; the short link cycle is the witness.
    #[error("positive curvature at vertex {vertex:?}: link cycle of length {cycle_len}")]
    Curvature { vertex: VertexId, cycle_len: usize },

    /// Developed ball too small for the requested computation.
    #[error("ball too small: computation reached radius {achieved}, needs at least {needed}")]
    BallTooSmall { achieved: usize, needed: usize },

    /// An iteration budget ran out before convergence.
    #[error("budget exceeded: {0} more steps requested than allowed")]
    BudgetExceeded(usize),

    /// Internal consistency check failed while developing a cover.
    /// Indicates the base complex is not actually nonpositively curved
    /// or the development logic hit a case it cannot handle.
    #[error("development failed: {0}")]
    DevelopmentFailed(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
