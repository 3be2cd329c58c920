//! Intrinsic geometry of a square complex: points, directions, piecewise
//! linear paths, and the operations that make them useful (straightening,
//! shortest paths, projections).
//!
//! Every point and breakpoint carries exact rational coordinates in the
//! frame of the cell it lives on. Floating point shows up only where a
//! value is genuinely transcendental (arc lengths, angles); everything
//! combinatorial is decided exactly.

mod link_metric;
mod project;
mod shortest;
mod straighten;
mod unfold;

pub use link_metric::{angle, cone_distance, Direction, DirectionAt, LinkPos, LinkRoute};
pub use project::{log_dir, project_to_path, slope_invariant, Projection, SlopeInvariant};
pub use shortest::{distance, shortest_path, shortest_path_jittered};
pub use straighten::{
    local_geodesic_check, r_geodesic_check, straighten, straighten_budgeted, BreakCheck,
    GeodesicReport, DEFAULT_REPAIR_BUDGET,
};

use num::{One, Signed, Zero};

use crate::complex::{SquareChain, SquareComplex};
use crate::error::{Error, Result};
use crate::ids::{EdgeId, End, SquareId, VertexId};
use crate::rational::{qi, to_f64, Q};

/// Planar point or vector with exact rational coordinates.
pub(crate) type P2 = (Q, Q);

pub(crate) fn p2(x: i64, y: i64) -> P2 {
    (qi(x), qi(y))
}

pub(crate) fn p2_sub(a: &P2, b: &P2) -> P2 {
    (&a.0 - &b.0, &a.1 - &b.1)
}

pub(crate) fn p2_add(a: &P2, b: &P2) -> P2 {
    (&a.0 + &b.0, &a.1 + &b.1)
}

pub(crate) fn p2_scale(a: &P2, s: &Q) -> P2 {
    (&a.0 * s, &a.1 * s)
}

pub(crate) fn p2_lerp(a: &P2, b: &P2, t: &Q) -> P2 {
    p2_add(a, &p2_scale(&p2_sub(b, a), t))
}

pub(crate) fn p2_dot(a: &P2, b: &P2) -> Q {
    &a.0 * &b.0 + &a.1 * &b.1
}

pub(crate) fn p2_cross(a: &P2, b: &P2) -> Q {
    &a.0 * &b.1 - &a.1 * &b.0
}

pub(crate) fn p2_len2(a: &P2) -> Q {
    p2_dot(a, a)
}

/// Exact angle between two nonzero rational vectors, in [0, pi].
pub(crate) fn vec_angle(a: &P2, b: &P2) -> f64 {
    let cross = to_f64(&p2_cross(a, b)).abs();
    let dot = to_f64(&p2_dot(a, b));
    cross.atan2(dot)
}

fn unit_range(t: &Q) -> bool {
    !t.is_negative() && t <= &Q::one()
}

/// A cell of a square complex, ordered by dimension then id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cell {
    Vertex(VertexId),
    Edge(EdgeId),
    Square(SquareId),
}

impl Cell {
    pub fn dim(&self) -> usize {
        match self {
            Cell::Vertex(_) => 0,
            Cell::Edge(_) => 1,
            Cell::Square(_) => 2,
        }
    }
}

/// A point of the complex in normal form: the cell named is the unique open
/// cell containing the point. Edge coordinates are the arc parameter from
/// end zero; square coordinates live in the unit-square frame of the
/// square's corner chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    Vertex(VertexId),
    Edge(EdgeId, Q),
    Square(SquareId, Q, Q),
}

impl Point {
    pub fn vertex(v: VertexId) -> Point {
        Point::Vertex(v)
    }

    /// Point at parameter `t` along an edge, measured from end zero.
    /// Endpoint parameters collapse to the vertex.
    pub fn on_edge(x: &SquareComplex, e: EdgeId, t: Q) -> Result<Point> {
        if !unit_range(&t) {
            return Err(Error::Domain(format!(
                "edge parameter {t} out of range [0, 1]"
            )));
        }
        if t.is_zero() {
            Ok(Point::Vertex(x.edge_end(e, End::Zero)))
        } else if t.is_one() {
            Ok(Point::Vertex(x.edge_end(e, End::One)))
        } else {
            Ok(Point::Edge(e, t))
        }
    }

    /// Point at unit-square coordinates (px, py) in the frame of square
    /// `s`. Boundary coordinates collapse to the edge or vertex they name.
    pub fn in_square(x: &SquareComplex, s: SquareId, px: Q, py: Q) -> Result<Point> {
        if !unit_range(&px) || !unit_range(&py) {
            return Err(Error::Domain(format!(
                "square coordinates ({px}, {py}) out of the unit square"
            )));
        }
        let on_x = px.is_zero() || px.is_one();
        let on_y = py.is_zero() || py.is_one();
        if on_x && on_y {
            let k = match (px.is_one(), py.is_one()) {
                (false, false) => 0,
                (true, false) => 1,
                (true, true) => 2,
                (false, true) => 3,
            };
            return Ok(Point::Vertex(x.corner_vertex(s, k)));
        }
        if on_y {
            // Side 0 runs corner 0 -> 1 at y = 0; side 2 runs 2 -> 3 at y = 1.
            let (k, lambda) = if py.is_zero() { (0, px) } else { (2, Q::one() - px) };
            return side_point(x, s, k, lambda);
        }
        if on_x {
            // Side 1 runs corner 1 -> 2 at x = 1; side 3 runs 3 -> 0 at x = 0.
            let (k, lambda) = if px.is_one() { (1, py) } else { (3, Q::one() - py) };
            return side_point(x, s, k, lambda);
        }
        Ok(Point::Square(s, px, py))
    }

    /// The open cell this point lies in.
    pub fn cell(&self) -> Cell {
        match self {
            Point::Vertex(v) => Cell::Vertex(*v),
            Point::Edge(e, _) => Cell::Edge(*e),
            Point::Square(s, _, _) => Cell::Square(*s),
        }
    }
}

/// Point at fraction `lambda` along side `k` of square `s`, measured from
/// corner `k`, translated into the edge's own parameter.
fn side_point(x: &SquareComplex, s: SquareId, k: u8, lambda: Q) -> Result<Point> {
    let e = x.side_edge(s, k);
    let a = x.corner_vertex(s, k);
    let t = if x.edge_end(e, End::Zero) == a { lambda } else { Q::one() - lambda };
    Point::on_edge(x, e, t)
}

pub(crate) fn corner_p2(k: u8) -> P2 {
    let (cx, cy) = SquareChain::CORNER_POS[k as usize % 4];
    p2(cx as i64, cy as i64)
}

/// Unit-square coordinates of `p` in the frame of square `s`, if the
/// closed square contains `p`.
pub(crate) fn coords_in_square(x: &SquareComplex, s: SquareId, p: &Point) -> Option<P2> {
    match p {
        Point::Square(s2, px, py) => (s2 == &s).then(|| (px.clone(), py.clone())),
        Point::Vertex(v) => (0..4)
            .find(|&k| x.corner_vertex(s, k) == *v)
            .map(corner_p2),
        Point::Edge(e, t) => {
            let k = (0..4).find(|&k| x.side_edge(s, k) == *e)?;
            // Fraction along the side from corner k, from the edge parameter.
            let a = x.corner_vertex(s, k);
            let lambda = if x.edge_end(*e, End::Zero) == a {
                t.clone()
            } else {
                Q::one() - t
            };
            Some(p2_lerp(&corner_p2(k), &corner_p2(k + 1), &lambda))
        }
    }
}

/// Arc parameter of `p` on edge `e`, if the closed edge contains `p`.
pub(crate) fn param_on_edge(x: &SquareComplex, e: EdgeId, p: &Point) -> Option<Q> {
    match p {
        Point::Edge(e2, t) => (e2 == &e).then(|| t.clone()),
        Point::Vertex(v) => {
            let [a, b] = x.edge_ends(e);
            if *v == a {
                Some(Q::zero())
            } else if *v == b {
                Some(Q::one())
            } else {
                None
            }
        }
        Point::Square(..) => None,
    }
}

/// All closed cells containing `p`, in (dimension, id) order.
pub(crate) fn cells_of_point(x: &SquareComplex, p: &Point) -> Vec<Cell> {
    let mut out = Vec::new();
    match p {
        Point::Vertex(v) => {
            out.push(Cell::Vertex(*v));
            for &(e, _) in x.edges_at(*v) {
                out.push(Cell::Edge(e));
            }
            for &(s, _) in x.corners_at(*v) {
                out.push(Cell::Square(s));
            }
        }
        Point::Edge(e, _) => {
            out.push(Cell::Edge(*e));
            for &(s, _) in x.squares_at_edge(*e) {
                out.push(Cell::Square(s));
            }
        }
        Point::Square(s, _, _) => out.push(Cell::Square(*s)),
    }
    out.sort();
    out.dedup();
    out
}

/// The smallest closed cell containing both points, if any. A straight
/// segment between the points inside that cell is then well defined.
pub(crate) fn segment_carrier(x: &SquareComplex, p: &Point, q: &Point) -> Option<Cell> {
    let a = cells_of_point(x, p);
    let b = cells_of_point(x, q);
    a.iter().find(|c| b.binary_search(c).is_ok()).copied()
}

/// Squared length of the straight segment from `p` to `q` inside `carrier`.
pub(crate) fn segment_len2(x: &SquareComplex, carrier: Cell, p: &Point, q: &Point) -> Q {
    match carrier {
        Cell::Vertex(_) => Q::zero(),
        Cell::Edge(e) => {
            let tp = param_on_edge(x, e, p).expect("segment endpoint off its carrier");
            let tq = param_on_edge(x, e, q).expect("segment endpoint off its carrier");
            let d = tp - tq;
            &d * &d
        }
        Cell::Square(s) => {
            let a = coords_in_square(x, s, p).expect("segment endpoint off its carrier");
            let b = coords_in_square(x, s, q).expect("segment endpoint off its carrier");
            p2_len2(&p2_sub(&b, &a))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
struct Seg {
    carrier: Cell,
    len2: Q,
}

/// A piecewise linear path: breakpoints plus, per segment, the cell the
/// segment runs through and its exact squared length.
#[derive(Clone, Debug, PartialEq)]
pub struct PLPath {
    pts: Vec<Point>,
    segs: Vec<Seg>,
}

impl PLPath {
    /// Builds a path through the given breakpoints. Consecutive points must
    /// share a closed cell and must not coincide.
    pub fn new(x: &SquareComplex, pts: Vec<Point>) -> Result<PLPath> {
        if pts.is_empty() {
            return Err(Error::Domain("a path needs at least one point".into()));
        }
        let mut segs = Vec::with_capacity(pts.len().saturating_sub(1));
        for (i, w) in pts.windows(2).enumerate() {
            if w[0] == w[1] {
                return Err(Error::Domain(format!(
                    "zero length segment at breakpoint {i}"
                )));
            }
            let carrier = segment_carrier(x, &w[0], &w[1]).ok_or_else(|| {
                Error::Domain(format!(
                    "breakpoints {i} and {} share no cell",
                    i + 1
                ))
            })?;
            let len2 = segment_len2(x, carrier, &w[0], &w[1]);
            segs.push(Seg { carrier, len2 });
        }
        Ok(PLPath { pts, segs })
    }

    pub fn points(&self) -> &[Point] {
        &self.pts
    }

    pub fn n_segments(&self) -> usize {
        self.segs.len()
    }

    pub fn carrier(&self, i: usize) -> Cell {
        self.segs[i].carrier
    }

    pub fn seg_len2(&self, i: usize) -> &Q {
        &self.segs[i].len2
    }

    pub fn seg_len(&self, i: usize) -> f64 {
        to_f64(&self.segs[i].len2).sqrt()
    }

    /// Total arc length.
    pub fn length(&self) -> f64 {
        (0..self.segs.len()).map(|i| self.seg_len(i)).sum()
    }

    pub fn first(&self) -> &Point {
        &self.pts[0]
    }

    pub fn last(&self) -> &Point {
        self.pts.last().unwrap()
    }

    /// Point at fraction `lambda` along segment `i`, in normal form.
    pub fn point_on(&self, x: &SquareComplex, i: usize, lambda: &Q) -> Point {
        debug_assert!(unit_range(lambda));
        if lambda.is_zero() {
            return self.pts[i].clone();
        }
        if lambda.is_one() {
            return self.pts[i + 1].clone();
        }
        let p = &self.pts[i];
        let q = &self.pts[i + 1];
        match self.segs[i].carrier {
            Cell::Vertex(_) => unreachable!("vertex carriers cannot carry a segment"),
            Cell::Edge(e) => {
                let tp = param_on_edge(x, e, p).unwrap();
                let tq = param_on_edge(x, e, q).unwrap();
                let t = &tp + lambda * (tq - &tp);
                Point::on_edge(x, e, t).unwrap()
            }
            Cell::Square(s) => {
                let a = coords_in_square(x, s, p).unwrap();
                let b = coords_in_square(x, s, q).unwrap();
                let (cx, cy) = p2_lerp(&a, &b, lambda);
                Point::in_square(x, s, cx, cy).unwrap()
            }
        }
    }

    /// Arc length of the path before segment `i`.
    pub fn prefix_len(&self, i: usize) -> f64 {
        (0..i).map(|j| self.seg_len(j)).sum()
    }

    /// Locates arc length `t` (clamped) as a segment index and a fraction
    /// along it.
    pub fn locate(&self, t: f64) -> (usize, f64) {
        if self.segs.is_empty() {
            return (0, 0.0);
        }
        let mut rest = t.max(0.0);
        for i in 0..self.segs.len() {
            let l = self.seg_len(i);
            if rest <= l || i == self.segs.len() - 1 {
                let frac = if l > 0.0 { (rest / l).min(1.0) } else { 0.0 };
                return (i, frac);
            }
            rest -= l;
        }
        unreachable!()
    }

    /// Point at arc length `t`, with the fraction snapped to a dyadic
    /// rational of denominator 2^`snap_bits` so coordinates stay small.
    pub fn point_at_len(&self, x: &SquareComplex, t: f64, snap_bits: u32) -> Point {
        if self.segs.is_empty() {
            return self.pts[0].clone();
        }
        let (i, frac) = self.locate(t);
        let denom = 1i64 << snap_bits.min(40);
        let num = (frac * denom as f64).round() as i64;
        let lambda = Q::new(num.clamp(0, denom).into(), denom.into());
        self.point_on(x, i, &lambda)
    }

    pub fn reversed(&self) -> PLPath {
        let mut pts = self.pts.clone();
        pts.reverse();
        let mut segs = self.segs.clone();
        segs.reverse();
        PLPath { pts, segs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn vid(x: &SquareComplex, name: &str) -> VertexId {
        x.vertex_by_name(name).unwrap()
    }

    fn eid(x: &SquareComplex, name: &str) -> EdgeId {
        x.edge_by_name(name).unwrap()
    }

    fn sid(x: &SquareComplex, name: &str) -> SquareId {
        x.square_by_name(name).unwrap()
    }

    use crate::rational::q;

    #[test]
    fn square_points_normalize_to_boundary_cells() {
        let x = corpus::grid(2);
        let s = sid(&x, "s00x00");

        let inside = Point::in_square(&x, s, q(1, 2), q(1, 3)).unwrap();
        assert_eq!(inside, Point::Square(s, q(1, 2), q(1, 3)));

        let corner = Point::in_square(&x, s, qi(1), qi(1)).unwrap();
        assert_eq!(corner, Point::Vertex(vid(&x, "v01x01")));

        // Bottom side of s00x00 is h00x00, oriented v00x00 -> v01x00.
        let bottom = Point::in_square(&x, s, q(1, 4), qi(0)).unwrap();
        assert_eq!(bottom, Point::Edge(eid(&x, "h00x00"), q(1, 4)));

        // Top side corner order runs 2 -> 3, against the edge orientation.
        let top = Point::in_square(&x, s, q(1, 4), qi(1)).unwrap();
        assert_eq!(top, Point::Edge(eid(&x, "h00x01"), q(1, 4)));

        let e = eid(&x, "u00x00");
        assert_eq!(
            Point::on_edge(&x, e, qi(0)).unwrap(),
            Point::Vertex(vid(&x, "v00x00"))
        );
        assert!(Point::on_edge(&x, e, q(3, 2)).is_err());
        assert!(Point::in_square(&x, s, q(-1, 2), q(1, 2)).is_err());
    }

    #[test]
    fn carriers_prefer_low_dimension() {
        let x = corpus::grid(2);
        let u = Point::Vertex(vid(&x, "v01x00"));
        let v = Point::Vertex(vid(&x, "v01x01"));
        // Adjacent vertices share both an edge and two squares; the edge wins.
        assert_eq!(
            segment_carrier(&x, &u, &v),
            Some(Cell::Edge(eid(&x, "u01x00")))
        );

        // Diagonal corners share only the square.
        let w = Point::Vertex(vid(&x, "v00x00"));
        assert_eq!(
            segment_carrier(&x, &w, &v),
            Some(Cell::Square(sid(&x, "s00x00")))
        );

        // Far apart: no common cell.
        let far = Point::Vertex(vid(&x, "v02x02"));
        assert_eq!(segment_carrier(&x, &w, &far), None);
    }

    #[test]
    fn path_lengths_are_exact() {
        let x = corpus::grid(2);
        let diag = PLPath::new(
            &x,
            vec![
                Point::Vertex(vid(&x, "v00x00")),
                Point::Vertex(vid(&x, "v01x01")),
                Point::Vertex(vid(&x, "v02x02")),
            ],
        )
        .unwrap();
        assert_eq!(diag.n_segments(), 2);
        assert_eq!(diag.seg_len2(0), &qi(2));
        assert!((diag.length() - 2.0 * 2f64.sqrt()).abs() < 1e-12);

        let mid = diag.point_on(&x, 0, &q(1, 2));
        assert_eq!(mid, Point::Square(sid(&x, "s00x00"), q(1, 2), q(1, 2)));

        // Interpolating to a boundary fraction lands on the shared vertex.
        assert_eq!(diag.point_on(&x, 0, &qi(1)), Point::Vertex(vid(&x, "v01x01")));

        let (i, f) = diag.locate(2f64.sqrt() * 1.5);
        assert_eq!(i, 1);
        assert!((f - 0.5).abs() < 1e-12);
    }

    #[test]
    fn degenerate_paths_are_rejected() {
        let x = corpus::grid(2);
        let v = Point::Vertex(vid(&x, "v00x00"));
        assert!(PLPath::new(&x, vec![]).is_err());
        assert!(PLPath::new(&x, vec![v.clone(), v.clone()]).is_err());
        let far = Point::Vertex(vid(&x, "v02x02"));
        assert!(PLPath::new(&x, vec![v.clone(), far]).is_err());
        // A single point is a legal (empty) path.
        let p = PLPath::new(&x, vec![v]).unwrap();
        assert_eq!(p.n_segments(), 0);
        assert_eq!(p.length(), 0.0);
    }
}
