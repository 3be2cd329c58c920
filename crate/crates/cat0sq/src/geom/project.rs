//! Projections onto geodesic paths, logarithm directions, and the slope
//! invariant of plane geodesics.
//!
//! Projection exploits convexity: in a nonpositively curved ball the
//! distance from a fixed point to a geodesic is convex in arc length, so
//! it is unimodal in the path parameter and a golden section search over
//! one global parameter finds the nearest point. Probe parameters are
//! snapped to dyadic fractions so every probed foot has small exact
//! coordinates.

use std::collections::BTreeMap;

use num::{Signed, Zero};

use super::link_metric::{Direction, DirectionAt};
use super::shortest::{shortest_path, shortest_path_seeded, Skeleton};
use super::straighten::{r_geodesic_check, vertex_dir};
use super::{coords_in_square, p2_sub, param_on_edge, segment_carrier, Cell, PLPath, Point};
use crate::cover::DevelopedBall;
use crate::error::{Error, Result};
use crate::ids::End;
use crate::links::link;
use crate::rational::{to_f64, Q};

/// Dyadic grid for projection feet: fractions along a segment are
/// multiples of 2^-20.
const SNAP_BITS: u32 = 20;
const SNAP: i64 = 1 << SNAP_BITS;

/// Nearest point of a path, as seen from a query point.
#[derive(Clone, Debug)]
pub struct Projection {
    pub foot: Point,
    /// Segment of the path the foot lies on.
    pub segment: usize,
    /// Exact fraction along that segment, a multiple of 2^-20.
    pub frac: Q,
    /// Arc length from the path's start to the foot.
    pub arc_param: f64,
    /// Geodesic distance from the query point to the foot.
    pub distance: f64,
}

/// Slope data shared by every segment of a plane geodesic.
#[derive(Clone, Debug, PartialEq)]
pub struct SlopeInvariant {
    /// Folded slope: the smaller of |dy/dx| and |dx/dy|, in [0, 1].
    pub tan: Q,
    /// The matching angle atan(tan), in [0, pi/4].
    pub alpha: f64,
}

fn snap_m(u: f64, n: usize) -> i64 {
    let top = (n as i64) * SNAP;
    ((u * SNAP as f64).round() as i64).clamp(0, top)
}

fn unsnap(m: i64, n: usize) -> (usize, Q) {
    let seg = ((m / SNAP) as usize).min(n - 1);
    let num = m - (seg as i64) * SNAP;
    (seg, Q::new(num.into(), SNAP.into()))
}

fn eval_m(
    ball: &DevelopedBall,
    skel: &Skeleton,
    path: &PLPath,
    p: &Point,
    eps: f64,
    memo: &mut BTreeMap<i64, f64>,
    m: i64,
) -> Result<f64> {
    if let Some(&d) = memo.get(&m) {
        return Ok(d);
    }
    let (seg, frac) = unsnap(m, path.n_segments());
    let foot = path.point_on(ball.ball(), seg, &frac);
    let d = shortest_path_seeded(ball, skel, p, &foot, eps, None)?.length();
    memo.insert(m, d);
    Ok(d)
}

/// Projects `p` onto `path`. The path must be a geodesic (so the distance
/// along it is unimodal); feet are snapped to the dyadic grid, which bounds
/// the parameter error by 2^-20 of a segment.
pub fn project_to_path(
    ball: &DevelopedBall,
    path: &PLPath,
    p: &Point,
    eps: f64,
) -> Result<Projection> {
    let x = ball.ball();
    let skel = Skeleton::new(ball);
    let n = path.n_segments();
    if n == 0 {
        let d = shortest_path_seeded(ball, &skel, p, path.first(), eps, None)?.length();
        return Ok(Projection {
            foot: path.first().clone(),
            segment: 0,
            frac: Q::zero(),
            arc_param: 0.0,
            distance: d,
        });
    }

    let mut memo = BTreeMap::new();
    let top = (n as i64) * SNAP;
    let probe = |memo: &mut BTreeMap<i64, f64>, u: f64| {
        eval_m(ball, &skel, path, p, eps, memo, snap_m(u, n))
    };

    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0f64, n as f64);
    probe(&mut memo, a)?;
    probe(&mut memo, b)?;
    let mut u1 = b - phi * (b - a);
    let mut u2 = a + phi * (b - a);
    let mut f1 = probe(&mut memo, u1)?;
    let mut f2 = probe(&mut memo, u2)?;
    for _ in 0..64 {
        if b - a < 1.0 / SNAP as f64 {
            break;
        }
        if f1 <= f2 {
            b = u2;
            u2 = u1;
            f2 = f1;
            u1 = b - phi * (b - a);
            f1 = probe(&mut memo, u1)?;
        } else {
            a = u1;
            u1 = u2;
            f1 = f2;
            u2 = a + phi * (b - a);
            f2 = probe(&mut memo, u2)?;
        }
    }
    // Snapping flattens the probed function into grid plateaus, which can
    // park the final interval one step away from the true grid minimum;
    // sweeping a small window around its midpoint absorbs that.
    let m_mid = snap_m((a + b) / 2.0, n);
    for m in (m_mid - 2).max(0)..=(m_mid + 2).min(top) {
        eval_m(ball, &skel, path, p, eps, &mut memo, m)?;
    }

    let (&m, &distance) = memo
        .iter()
        .min_by(|(m1, d1), (m2, d2)| d1.total_cmp(d2).then(m1.cmp(m2)))
        .unwrap();
    let (segment, frac) = unsnap(m, n);
    let foot = path.point_on(x, segment, &frac);
    let arc_param = path.prefix_len(segment) + to_f64(&frac) * path.seg_len(segment);
    Ok(Projection { foot, segment, frac, arc_param, distance })
}

/// Direction at `p` of the geodesic from `p` to `q`.
pub fn log_dir(ball: &DevelopedBall, p: &Point, q: &Point, eps: f64) -> Result<Direction> {
    let x = ball.ball();
    if p == q {
        return Err(Error::Domain("no direction from a point to itself".into()));
    }
    let (next, carrier) = match segment_carrier(x, p, q) {
        Some(c) => (q.clone(), c),
        None => {
            let g = shortest_path(ball, p, q, eps)?;
            (g.points()[1].clone(), g.carrier(0))
        }
    };
    let at = match (p, carrier) {
        (Point::Vertex(v), c) => {
            let l = link(x, *v);
            DirectionAt::AtVertex { pos: vertex_dir(x, &l, *v, c, &next)? }
        }
        (_, Cell::Edge(e)) => {
            let tp = param_on_edge(x, e, p).expect("point off its edge");
            let tq = param_on_edge(x, e, &next).expect("segment endpoint off its carrier");
            DirectionAt::AlongEdge {
                edge: e,
                toward: if tq > tp { End::One } else { End::Zero },
            }
        }
        (_, Cell::Square(s)) => {
            let d = p2_sub(
                &coords_in_square(x, s, &next).expect("segment endpoint off its carrier"),
                &coords_in_square(x, s, p).expect("point off its square"),
            );
            DirectionAt::InSquare { square: s, vx: d.0, vy: d.1 }
        }
        (_, Cell::Vertex(_)) => unreachable!("distinct points cannot share a vertex cell"),
    };
    Ok(Direction { anchor: p.clone(), at })
}

/// Folded slope of segment `i` of the path: axis distances swap when a
/// geodesic crosses a side, so only the unordered pair survives; folding
/// to [0, 1] makes it a single number.
fn folded_tan(x: &crate::complex::SquareComplex, path: &PLPath, i: usize) -> Q {
    match path.carrier(i) {
        Cell::Edge(_) => Q::zero(),
        Cell::Square(s) => {
            let a = coords_in_square(x, s, &path.points()[i]).unwrap();
            let b = coords_in_square(x, s, &path.points()[i + 1]).unwrap();
            let dx = (&b.0 - &a.0).abs();
            let dy = (&b.1 - &a.1).abs();
            let (lo, hi) = if dx <= dy { (dx, dy) } else { (dy, dx) };
            debug_assert!(!hi.is_zero(), "zero length segments are normalized away");
            lo / hi
        }
        Cell::Vertex(_) => unreachable!("vertex carriers cannot carry a segment"),
    }
}

/// The folded slope every segment of a plane geodesic shares. Exact
/// agreement is required where coordinates are exact; a float comparison
/// within `eps` is the fallback for paths built from measured data.
pub fn slope_invariant(ball: &DevelopedBall, path: &PLPath, eps: f64) -> Result<SlopeInvariant> {
    if path.n_segments() == 0 {
        return Err(Error::Domain("a single point has no slope".into()));
    }
    if !r_geodesic_check(ball, path, eps)? {
        return Err(Error::Domain(
            "slope invariant is defined for plane geodesics only".into(),
        ));
    }
    let x = ball.ball();
    let first = folded_tan(x, path, 0);
    for i in 1..path.n_segments() {
        let t = folded_tan(x, path, i);
        if t != first && (to_f64(&t) - to_f64(&first)).abs() > eps {
            return Err(Error::Domain(format!(
                "folded slope varies along the path: {first} vs {t}"
            )));
        }
    }
    let alpha = to_f64(&first).atan();
    Ok(SlopeInvariant { tan: first, alpha })
}

#[cfg(test)]
mod tests {
    use super::super::link_metric::LinkPos;
    use super::*;
    use crate::complex::SquareComplex;
    use crate::corpus;
    use crate::cover::from_simply_connected;
    use crate::rational::{q, qi};

    fn whole(x: SquareComplex, base: &str) -> DevelopedBall {
        let v = x.vertex_by_name(base).unwrap();
        from_simply_connected(&x, v).unwrap()
    }

    fn vp(ball: &DevelopedBall, name: &str) -> Point {
        Point::Vertex(ball.ball().vertex_by_name(name).unwrap())
    }

    fn vertical_path(ball: &DevelopedBall) -> PLPath {
        PLPath::new(
            ball.ball(),
            vec![
                vp(ball, "v02x00"),
                vp(ball, "v02x01"),
                vp(ball, "v02x02"),
                vp(ball, "v02x03"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn grid_projection_lands_on_the_perpendicular_foot() {
        let ball = whole(corpus::grid(4), "v00x00");
        let path = vertical_path(&ball);

        // From (0, 1) the nearest path point is (2, 1), two away.
        let p = vp(&ball, "v00x01");
        let proj = project_to_path(&ball, &path, &p, 1e-9).unwrap();
        assert_eq!(proj.foot, vp(&ball, "v02x01"));
        assert_eq!(proj.segment, 1);
        assert!(proj.frac.is_zero());
        assert!((proj.distance - 2.0).abs() < 1e-12);
        assert!((proj.arc_param - 1.0).abs() < 1e-12);
    }

    #[test]
    fn points_on_the_path_project_to_themselves() {
        let ball = whole(corpus::grid(4), "v00x00");
        let x = ball.ball();
        let path = vertical_path(&ball);

        let e = x.edge_by_name("u02x01").unwrap();
        let p = Point::on_edge(x, e, q(1, 2)).unwrap();
        let proj = project_to_path(&ball, &path, &p, 1e-9).unwrap();
        assert_eq!(proj.foot, p);
        assert_eq!(proj.distance, 0.0);
        assert!((proj.arc_param - 1.5).abs() < 1e-9);
    }

    #[test]
    fn far_sector_projections_fall_onto_the_cone() {
        let ball = whole(corpus::fake_disk(2), "cone");
        let x = ball.ball();
        // A geodesic chord of sheet 0 with the cone at distance sqrt(2).
        let path = PLPath::new(
            x,
            vec![vp(&ball, "ray0t02"), vp(&ball, "sh0v01x01"), vp(&ball, "ray1t02")],
        )
        .unwrap();
        assert!(r_geodesic_check(&ball, &path, 1e-9).unwrap());

        // Sheet 3 faces the chord across more than pi of link angle, so
        // every geodesic to the path passes the cone point and the nearest
        // point is the chord's midpoint.
        let p = vp(&ball, "sh3v01x01");
        let proj = project_to_path(&ball, &path, &p, 1e-9).unwrap();
        assert_eq!(proj.foot, vp(&ball, "sh0v01x01"));
        assert_eq!(proj.segment, 1);
        assert!(proj.frac.is_zero());
        assert!((proj.distance - 2.0 * 2f64.sqrt()).abs() < 1e-9);
        assert!((proj.arc_param - 2f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn slope_invariant_is_the_folded_ratio() {
        let ball = whole(corpus::grid(6), "v00x00");
        let g = super::super::shortest::shortest_path(
            &ball,
            &vp(&ball, "v00x00"),
            &vp(&ball, "v03x02"),
            1e-9,
        )
        .unwrap();
        let inv = slope_invariant(&ball, &g, 1e-9).unwrap();
        assert_eq!(inv.tan, q(2, 3));
        assert!((inv.alpha - (2f64 / 3.0).atan()).abs() < 1e-12);

        // Axis parallel paths have slope zero.
        let flat = PLPath::new(
            ball.ball(),
            vec![vp(&ball, "v00x00"), vp(&ball, "v01x00"), vp(&ball, "v02x00")],
        )
        .unwrap();
        let inv = slope_invariant(&ball, &flat, 1e-9).unwrap();
        assert!(inv.tan.is_zero());
        assert_eq!(inv.alpha, 0.0);

        // A bent path has no slope invariant.
        let bent = PLPath::new(
            ball.ball(),
            vec![vp(&ball, "v00x00"), vp(&ball, "v01x00"), vp(&ball, "v01x01")],
        )
        .unwrap();
        assert!(slope_invariant(&ball, &bent, 1e-9).is_err());
    }

    #[test]
    fn log_directions_take_every_combinatorial_form() {
        let ball = whole(corpus::grid(6), "v00x00");
        let x = ball.ball();
        let s = x.square_by_name("s00x00").unwrap();
        let e = x.edge_by_name("h00x00").unwrap();

        // Far target from a vertex: the direction enters the first square
        // with the geodesic's exact slope.
        let p = vp(&ball, "v00x00");
        let d = log_dir(&ball, &p, &vp(&ball, "v03x02"), 1e-9).unwrap();
        assert_eq!(d.anchor, p);
        match d.at {
            DirectionAt::AtVertex { pos: LinkPos::Corner { along_out, along_in, .. } } => {
                assert_eq!(&along_in * qi(3), &along_out * qi(2));
            }
            other => panic!("expected a corner direction, got {other:?}"),
        }

        // Along an edge.
        let a = Point::on_edge(x, e, q(1, 4)).unwrap();
        let b = Point::on_edge(x, e, q(3, 4)).unwrap();
        let d = log_dir(&ball, &a, &b, 1e-9).unwrap();
        assert_eq!(d.at, DirectionAt::AlongEdge { edge: e, toward: End::One });
        let d = log_dir(&ball, &b, &a, 1e-9).unwrap();
        assert_eq!(d.at, DirectionAt::AlongEdge { edge: e, toward: End::Zero });

        // Inside a square, with exact components.
        let a = Point::in_square(x, s, q(1, 4), q(1, 4)).unwrap();
        let b = Point::in_square(x, s, q(3, 4), q(1, 2)).unwrap();
        let d = log_dir(&ball, &a, &b, 1e-9).unwrap();
        assert_eq!(
            d.at,
            DirectionAt::InSquare { square: s, vx: q(1, 2), vy: q(1, 4) }
        );

        // A vertex toward an adjacent edge point: the edge germ.
        let d = log_dir(&ball, &p, &Point::on_edge(x, e, q(1, 2)).unwrap(), 1e-9).unwrap();
        assert!(matches!(d.at, DirectionAt::AtVertex { pos: LinkPos::Node(_) }));

        assert!(log_dir(&ball, &p, &p, 1e-9).is_err());
    }
}
