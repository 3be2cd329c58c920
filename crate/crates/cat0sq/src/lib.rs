//! Nonpositively curved square complexes, executable.
//!
//! The crate models finite square complexes with validated polygonal axioms,
//! builds vertex links and decides nonpositive curvature, develops balls of
//! the universal cover, detects flat/quarter/fake disk patterns, computes
//! exact CAT(0) geodesics by unfolding and straightening, and certifies free
//! subgroups of rank two through the projection ping-pong criterion.
//!
//! Coordinates and squared lengths are exact rationals end to end; floating
//! point appears only where angles (arctangents) force it, guarded by a
//! single global tolerance.

pub mod complex;
pub mod corpus;
pub mod cover;
pub mod error;
pub mod format;
pub mod geom;
pub mod ids;
pub mod links;
pub mod rational;

pub use complex::{CellularMap, SquareComplex, ValidationReport};
pub use error::{Error, Result};
