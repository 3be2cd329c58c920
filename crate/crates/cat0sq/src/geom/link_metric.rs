//! The angular metric on vertex links, and directions at points.
//!
//! A vertex link is a metric graph: germ nodes, and an arc of length pi/2
//! through every square corner. Positions inside an arc are kept as the
//! exact rational components of a direction vector in the corner's square
//! frame; angles become floats only at the final arctangent.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::f64::consts::{FRAC_PI_2, PI};

use num::{Signed, Zero};

use super::{corner_p2, p2_dot, p2_sub, vec_angle, Point, P2};
use crate::complex::SquareComplex;
use crate::error::{Error, Result};
use crate::ids::{EdgeId, End, SquareId, VertexId};
use crate::links::LinkGraph;
use crate::rational::{to_f64, Q};

/// Total order on floats for priority queues; inputs are never NaN.
#[derive(Clone, Copy, PartialEq, Debug)]
pub(crate) struct OrdF64(pub(crate) f64);

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// A position on a vertex link: either a germ node or a point inside a
/// corner arc. Corner positions store the direction's components along the
/// corner's two sides, so the offset angle is exact until measured.
#[derive(Clone, Debug, PartialEq)]
pub enum LinkPos {
    Node(usize),
    Corner {
        corner: usize,
        /// Component along the side leaving the corner (toward node `b`).
        along_out: Q,
        /// Component along the side entering the corner (toward node `a`).
        along_in: Q,
    },
}

impl LinkPos {
    /// Offset angle from the corner's outgoing node, in (0, pi/2).
    fn corner_offset(along_out: &Q, along_in: &Q) -> f64 {
        to_f64(along_in).atan2(to_f64(along_out))
    }

    /// Nodes reachable without crossing another node, with their angular
    /// cost.
    fn anchors(&self, l: &LinkGraph) -> Vec<(usize, f64)> {
        match self {
            LinkPos::Node(n) => vec![(*n, 0.0)],
            LinkPos::Corner { corner, along_out, along_in } => {
                let c = l.corner(*corner);
                let theta = Self::corner_offset(along_out, along_in);
                vec![(c.b, theta), (c.a, FRAC_PI_2 - theta)]
            }
        }
    }
}

/// A shortest route through a vertex link: its length and the germ nodes
/// crossed, in order. Two positions inside the same corner arc connect
/// directly and cross no nodes.
#[derive(Clone, Debug)]
pub struct LinkRoute {
    pub dist: f64,
    pub nodes: Vec<usize>,
}

/// Shortest route between two link positions. Unreachable positions get an
/// infinite distance and an empty node list.
pub(crate) fn link_route(l: &LinkGraph, from: &LinkPos, to: &LinkPos) -> LinkRoute {
    if let (
        LinkPos::Corner { corner: c1, along_out: o1, along_in: i1 },
        LinkPos::Corner { corner: c2, along_out: o2, along_in: i2 },
    ) = (from, to)
    {
        if c1 == c2 {
            // Within one arc the direct route always beats going around.
            let d = (LinkPos::corner_offset(o1, i1) - LinkPos::corner_offset(o2, i2)).abs();
            return LinkRoute { dist: d, nodes: Vec::new() };
        }
    }
    if let (LinkPos::Node(a), LinkPos::Node(b)) = (from, to) {
        if a == b {
            return LinkRoute { dist: 0.0, nodes: vec![*a] };
        }
    }

    let n = l.n_nodes();
    let mut dist = vec![f64::INFINITY; n];
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    for (node, cost) in from.anchors(l) {
        if cost < dist[node] {
            dist[node] = cost;
            heap.push(Reverse((OrdF64(cost), node)));
        }
    }
    while let Some(Reverse((OrdF64(d), u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(_, w) in l.neighbors(u) {
            let nd = d + FRAC_PI_2;
            if nd < dist[w] {
                dist[w] = nd;
                parent[w] = Some(u);
                heap.push(Reverse((OrdF64(nd), w)));
            }
        }
    }

    let mut best: Option<(f64, usize)> = None;
    for (node, cost) in to.anchors(l) {
        let total = dist[node] + cost;
        if best.map_or(true, |(bd, bn)| total < bd || (total == bd && node < bn)) {
            best = Some((total, node));
        }
    }
    let (total, mut at) = best.unwrap();
    if !total.is_finite() {
        return LinkRoute { dist: f64::INFINITY, nodes: Vec::new() };
    }
    let mut nodes = vec![at];
    while let Some(p) = parent[at] {
        nodes.push(p);
        at = p;
    }
    nodes.reverse();
    LinkRoute { dist: total, nodes }
}

pub(crate) fn link_distance(l: &LinkGraph, from: &LinkPos, to: &LinkPos) -> f64 {
    link_route(l, from, to).dist
}

/// Distance between two points on the Euclidean cone over a vertex link:
/// radii `t1`, `t2` along directions at link distance `d_link`. Beyond
/// opening pi the two radial segments through the apex are the geodesic.
pub fn cone_distance(t1: f64, t2: f64, d_link: f64) -> f64 {
    debug_assert!(t1 >= 0.0 && t2 >= 0.0 && d_link >= 0.0);
    if t1 == 0.0 || t2 == 0.0 {
        return t1 + t2;
    }
    if d_link >= PI {
        t1 + t2
    } else {
        (t1 * t1 + t2 * t2 - 2.0 * t1 * t2 * d_link.cos()).sqrt()
    }
}

/// Link index of square `s`'s corner number `k`.
pub(crate) fn corner_index_in_link(l: &LinkGraph, s: SquareId, k: u8) -> Option<usize> {
    l.corners().iter().position(|c| c.square == s && c.k == k)
}

/// Link position of a direction vector `d` from vertex `v` into square
/// `s`, in the square's frame. `d` must point into the closed square.
pub(crate) fn linkpos_in_square(
    x: &SquareComplex,
    l: &LinkGraph,
    v: VertexId,
    s: SquareId,
    d: &P2,
) -> Result<LinkPos> {
    let k = (0..4)
        .find(|&k| x.corner_vertex(s, k) == v)
        .ok_or_else(|| Error::Domain(format!("vertex is not a corner of square {}", s.index())))?;
    let here = corner_p2(k);
    let u_out = p2_sub(&corner_p2(k + 1), &here);
    let u_in = p2_sub(&corner_p2(k + 3), &here);
    let along_out = p2_dot(d, &u_out);
    let along_in = p2_dot(d, &u_in);
    if along_out.is_negative() || along_in.is_negative() || (along_out.is_zero() && along_in.is_zero()) {
        return Err(Error::Domain(
            "direction does not point into the square from its corner".into(),
        ));
    }
    let corner = corner_index_in_link(l, s, k)
        .ok_or_else(|| Error::Domain("square corner missing from link".into()))?;
    let c = l.corner(corner);
    if along_in.is_zero() {
        Ok(LinkPos::Node(c.b))
    } else if along_out.is_zero() {
        Ok(LinkPos::Node(c.a))
    } else {
        Ok(LinkPos::Corner { corner, along_out, along_in })
    }
}

/// Link position of the germ of edge `e` at vertex `v`.
pub(crate) fn linkpos_of_germ(x: &SquareComplex, l: &LinkGraph, v: VertexId, e: EdgeId) -> Result<LinkPos> {
    let end = x.end_at(e, v);
    let n = l
        .node_of(e, end)
        .ok_or_else(|| Error::Domain("edge germ missing from link".into()))?;
    Ok(LinkPos::Node(n))
}

/// A direction at a point: the anchor point together with where the
/// direction immediately goes.
#[derive(Clone, Debug, PartialEq)]
pub struct Direction {
    pub anchor: Point,
    pub at: DirectionAt,
}

/// The combinatorial form of a direction. Square vectors are in the named
/// square's frame; an edge-interior anchor may carry a square vector for
/// any square on that edge.
#[derive(Clone, Debug, PartialEq)]
pub enum DirectionAt {
    InSquare { square: SquareId, vx: Q, vy: Q },
    AlongEdge { edge: EdgeId, toward: End },
    AtVertex { pos: LinkPos },
}

/// Frame vector of edge `e` inside square `s`, pointing toward end
/// `toward` of the edge.
fn edge_vec_in_square(x: &SquareComplex, s: SquareId, e: EdgeId, toward: End) -> Result<P2> {
    let k = (0..4)
        .find(|&k| x.side_edge(s, k) == e)
        .ok_or_else(|| Error::Domain(format!("edge is not a side of square {}", s.index())))?;
    let d = p2_sub(&corner_p2(k + 1), &corner_p2(k));
    if x.corner_vertex(s, (k + 1) % 4) == x.edge_end(e, toward) {
        Ok(d)
    } else {
        Ok((-d.0, -d.1))
    }
}

fn square_dir_checked(x: &SquareComplex, anchor: &Point, square: SquareId, vx: &Q, vy: &Q) -> Result<P2> {
    if vx.is_zero() && vy.is_zero() {
        return Err(Error::Domain("zero direction vector".into()));
    }
    match anchor {
        Point::Square(s, _, _) if *s == square => Ok((vx.clone(), vy.clone())),
        Point::Edge(e, _) if (0..4).any(|k| x.side_edge(square, k) == *e) => Ok((vx.clone(), vy.clone())),
        _ => Err(Error::Domain(
            "square direction anchored off the square and its sides".into(),
        )),
    }
}

/// Angle between two directions at the same point, capped at pi. At a
/// vertex this is the capped link distance; elsewhere it is measured in
/// one or two unfolded squares.
pub fn angle(x: &SquareComplex, u: &Direction, v: &Direction) -> Result<f64> {
    if u.anchor != v.anchor {
        return Err(Error::Domain("directions anchored at different points".into()));
    }
    let d = match (&u.at, &v.at) {
        (DirectionAt::AtVertex { pos: p1 }, DirectionAt::AtVertex { pos: p2 }) => {
            let vert = match &u.anchor {
                Point::Vertex(w) => *w,
                _ => return Err(Error::Domain("vertex direction anchored off a vertex".into())),
            };
            let l = crate::links::link(x, vert);
            link_distance(&l, p1, p2)
        }
        (
            DirectionAt::AlongEdge { edge: e1, toward: t1 },
            DirectionAt::AlongEdge { edge: e2, toward: t2 },
        ) => {
            let anchored = matches!(&u.anchor, Point::Edge(e, _) if e == e1);
            if !anchored || e1 != e2 {
                return Err(Error::Domain("edge directions anchored off their edge".into()));
            }
            if t1 == t2 {
                0.0
            } else {
                PI
            }
        }
        (DirectionAt::AlongEdge { edge, toward }, DirectionAt::InSquare { square, vx, vy })
        | (DirectionAt::InSquare { square, vx, vy }, DirectionAt::AlongEdge { edge, toward }) => {
            match &u.anchor {
                Point::Edge(e, _) if e == edge => {}
                _ => return Err(Error::Domain("edge direction anchored off its edge".into())),
            }
            let a = edge_vec_in_square(x, *square, *edge, *toward)?;
            let b = square_dir_checked(x, &u.anchor, *square, vx, vy)?;
            vec_angle(&a, &b)
        }
        (
            DirectionAt::InSquare { square: s1, vx: x1, vy: y1 },
            DirectionAt::InSquare { square: s2, vx: x2, vy: y2 },
        ) => {
            let a = square_dir_checked(x, &u.anchor, *s1, x1, y1)?;
            let b = square_dir_checked(x, &u.anchor, *s2, x2, y2)?;
            if s1 == s2 {
                vec_angle(&a, &b)
            } else {
                // Different squares hinge on the shared edge: measure each
                // vector against the two poles and take the shorter way.
                let e = match &u.anchor {
                    Point::Edge(e, _) => *e,
                    _ => {
                        return Err(Error::Domain(
                            "directions in different squares need an edge anchor".into(),
                        ))
                    }
                };
                let mut best = f64::INFINITY;
                for end in [End::Zero, End::One] {
                    let pa = edge_vec_in_square(x, *s1, e, end)?;
                    let pb = edge_vec_in_square(x, *s2, e, end)?;
                    best = best.min(vec_angle(&a, &pa) + vec_angle(&b, &pb));
                }
                best
            }
        }
        _ => {
            return Err(Error::Domain(
                "directions of incompatible kinds at one anchor".into(),
            ))
        }
    };
    Ok(d.min(PI))
}
