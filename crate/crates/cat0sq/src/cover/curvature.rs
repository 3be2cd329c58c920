//! Exact combinatorial curvature, tallied in integer units of π/2.
//!
//! A vertex whose link is a single cycle is a surface-interior point; its
//! curvature is 2π minus π/2 per corner, i.e. (4 − corners)·π/2. A vertex
//! whose link is a single path is a surface-boundary point; its boundary
//! turning is π minus π/2 per corner, i.e. (2 − corners)·π/2. Summing,
//! interior curvature plus boundary turning equals 2π·χ — exactly, since
//! everything is an integer multiple of π/2.

use crate::complex::SquareComplex;
use crate::error::{Error, Result};
use crate::ids::VertexId;
use crate::links::link;

#[derive(Clone, Debug)]
pub struct CurvatureAccount {
    /// Interior vertices with curvature in π/2 units: 4 − #corners.
    pub interior: Vec<(VertexId, i64)>,
    /// Boundary vertices with turning in π/2 units: 2 − #corners.
    pub boundary: Vec<(VertexId, i64)>,
    pub interior_sum: i64,
    pub turning_sum: i64,
}

impl CurvatureAccount {
    /// Gauss-Bonnet total in π/2 units; equals 4·χ for a surface.
    pub fn total(&self) -> i64 {
        self.interior_sum + self.turning_sum
    }

    pub fn interior_sum_radians(&self) -> f64 {
        self.interior_sum as f64 * std::f64::consts::FRAC_PI_2
    }

    pub fn turning_sum_radians(&self) -> f64 {
        self.turning_sum as f64 * std::f64::consts::FRAC_PI_2
    }
}

/// Classifies every vertex as surface-interior (link one cycle) or
/// surface-boundary (link one path) and tallies exact curvature. Errors if
/// some vertex is not a surface point, e.g. a wedge point or a dangling
/// edge.
pub fn curvature_account(x: &SquareComplex) -> Result<CurvatureAccount> {
    let mut acc = CurvatureAccount {
        interior: Vec::new(),
        boundary: Vec::new(),
        interior_sum: 0,
        turning_sum: 0,
    };
    for v in x.vertices() {
        let l = link(x, v);
        let not_surface = |what: &str| {
            Err(Error::Domain(format!(
                "vertex {} is not a surface point ({what})",
                x.vertex_name(v)
            )))
        };
        if l.n_nodes() == 0 {
            return not_surface("isolated vertex");
        }
        if l.bfs_dist(0).contains(&None) {
            return not_surface("disconnected link");
        }
        let mut loose_ends = 0usize;
        for i in 0..l.n_nodes() {
            match l.degree(i) {
                2 => {}
                1 => loose_ends += 1,
                _ => return not_surface("branching link"),
            }
        }
        let corners = l.n_corners() as i64;
        match loose_ends {
            0 => {
                let k = 4 - corners;
                acc.interior_sum += k;
                acc.interior.push((v, k));
            }
            2 => {
                let t = 2 - corners;
                acc.turning_sum += t;
                acc.boundary.push((v, t));
            }
            _ => return not_surface("dangling edge"),
        }
    }
    Ok(acc)
}
