//! Straightening piecewise linear paths into local geodesics.
//!
//! A path is locally geodesic when at every interior breakpoint the two
//! outgoing directions are at link distance at least pi. The straightener
//! repairs one defect at a time: bends inside a vertex free stretch are
//! pulled taut through the sleeve of squares the stretch runs through, and
//! a bend at a vertex is cut across the fan of squares along the shortest
//! link route, trimming the cut to radius one so it stays inside the fan.
//! Every repair strictly shortens the path or leaves it fixed, and a
//! budget bounds the number of repairs.

use std::f64::consts::PI;

use num::{BigInt, One, Signed, Zero};

use super::link_metric::{link_distance, link_route, linkpos_in_square, linkpos_of_germ, LinkPos};
use super::unfold::{chord_points, place_next, side_index, sleeve_pull, AffineIso, Sleeve};
use super::{
    coords_in_square, corner_p2, p2_add, p2_cross, p2_dot, p2_len2, p2_scale, p2_sub,
    param_on_edge, vec_angle, Cell, PLPath, Point, P2,
};
use crate::cover::DevelopedBall;
use crate::error::{Error, Result};
use crate::ids::{EdgeId, SquareId, VertexId};
use crate::links::{link, LinkGraph};
use crate::rational::{ceil_sqrt, Q};

/// Default cap on the number of straightening repairs.
pub const DEFAULT_REPAIR_BUDGET: usize = 100_000;

/// Link distance between the two directions leaving one interior
/// breakpoint, not capped at pi.
#[derive(Clone, Debug)]
pub struct BreakCheck {
    /// Breakpoint index into the path's point list.
    pub index: usize,
    pub link_dist: f64,
}

/// Per breakpoint result of a local geodesic inspection.
#[derive(Clone, Debug)]
pub struct GeodesicReport {
    pub checks: Vec<BreakCheck>,
}

impl GeodesicReport {
    /// Locally geodesic: every breakpoint opens at least pi.
    pub fn passes(&self, eps: f64) -> bool {
        self.checks.iter().all(|c| c.link_dist >= PI - eps)
    }

    pub fn worst(&self) -> Option<&BreakCheck> {
        self.checks
            .iter()
            .min_by(|a, b| a.link_dist.total_cmp(&b.link_dist))
    }
}

/// Verifies that the ball is deep enough to certify geometry along the
/// path: every breakpoint vertex and every vertex of every carrier cell
/// must be complete.
fn require_region(ball: &DevelopedBall, path: &PLPath) -> Result<()> {
    let x = ball.ball();
    for p in path.points() {
        if let Point::Vertex(v) = p {
            ball.require_vertex_complete(*v)?;
        }
    }
    for i in 0..path.n_segments() {
        match path.carrier(i) {
            Cell::Vertex(_) => {}
            Cell::Edge(e) => {
                for v in x.edge_ends(e) {
                    ball.require_vertex_complete(v)?;
                }
            }
            Cell::Square(s) => {
                for k in 0..4 {
                    ball.require_vertex_complete(x.corner_vertex(s, k))?;
                }
            }
        }
    }
    Ok(())
}

/// Link position of the direction leaving vertex `v` along a segment with
/// the given carrier toward `other`.
pub(crate) fn vertex_dir(
    x: &crate::complex::SquareComplex,
    l: &LinkGraph,
    v: VertexId,
    carrier: Cell,
    other: &Point,
) -> Result<LinkPos> {
    match carrier {
        Cell::Square(s) => {
            let a = coords_in_square(x, s, &Point::Vertex(v)).expect("vertex off its square");
            let b = coords_in_square(x, s, other).expect("segment endpoint off its carrier");
            linkpos_in_square(x, l, v, s, &p2_sub(&b, &a))
        }
        Cell::Edge(e) => linkpos_of_germ(x, l, v, e),
        Cell::Vertex(_) => unreachable!("zero length segments are normalized away"),
    }
}

/// Angle between rational vectors with the straight and reversed cases
/// decided exactly.
fn exact_angle(a: &P2, b: &P2) -> f64 {
    let cross = p2_cross(a, b);
    if cross.is_zero() {
        return if p2_dot(a, b).is_negative() { PI } else { 0.0 };
    }
    vec_angle(a, b)
}

enum EdgeDir {
    Along(crate::ids::End),
    Into(SquareId, P2),
}

/// Direction leaving an edge interior point along a segment.
fn edge_dir(
    x: &crate::complex::SquareComplex,
    e: EdgeId,
    t_here: &Q,
    carrier: Cell,
    here: &Point,
    other: &Point,
) -> EdgeDir {
    match carrier {
        Cell::Edge(e2) => {
            debug_assert_eq!(e, e2);
            let t_other = param_on_edge(x, e, other).expect("segment endpoint off its carrier");
            EdgeDir::Along(if t_other > *t_here {
                crate::ids::End::One
            } else {
                crate::ids::End::Zero
            })
        }
        Cell::Square(s) => {
            let a = coords_in_square(x, s, here).expect("breakpoint off its carrier");
            let b = coords_in_square(x, s, other).expect("segment endpoint off its carrier");
            EdgeDir::Into(s, p2_sub(&b, &a))
        }
        Cell::Vertex(_) => unreachable!(),
    }
}

/// Direction of edge `e` toward `end`, in the frame of square `s`.
fn edge_axis(x: &crate::complex::SquareComplex, s: SquareId, e: EdgeId, end: crate::ids::End) -> P2 {
    let k = side_index(x, s, e).expect("edge off its square");
    let d = p2_sub(&corner_p2(k + 1), &corner_p2(k));
    if x.corner_vertex(s, (k + 1) % 4) == x.edge_end(e, end) {
        d
    } else {
        (-d.0, -d.1)
    }
}

/// Opening between the two directions at breakpoint `i`, uncapped.
fn break_dist(ball: &DevelopedBall, path: &PLPath, i: usize) -> Result<f64> {
    let x = ball.ball();
    let pts = path.points();
    let here = &pts[i];
    let prev = &pts[i - 1];
    let next = &pts[i + 1];
    match here {
        Point::Vertex(v) => {
            let l = link(x, *v);
            let u = vertex_dir(x, &l, *v, path.carrier(i - 1), prev)?;
            let w = vertex_dir(x, &l, *v, path.carrier(i), next)?;
            Ok(link_distance(&l, &u, &w))
        }
        Point::Edge(e, t) => {
            let u = edge_dir(x, *e, t, path.carrier(i - 1), here, prev);
            let w = edge_dir(x, *e, t, path.carrier(i), here, next);
            Ok(match (u, w) {
                (EdgeDir::Along(a), EdgeDir::Along(b)) => {
                    if a == b {
                        0.0
                    } else {
                        PI
                    }
                }
                (EdgeDir::Along(end), EdgeDir::Into(s, v)) | (EdgeDir::Into(s, v), EdgeDir::Along(end)) => {
                    exact_angle(&edge_axis(x, s, *e, end), &v)
                }
                (EdgeDir::Into(s1, v1), EdgeDir::Into(s2, v2)) => {
                    if s1 == s2 {
                        exact_angle(&v1, &v2)
                    } else {
                        // Unfold the second square across the edge; the
                        // planar angle is the link distance through the
                        // nearer pole.
                        let k1 = side_index(x, s1, *e).unwrap();
                        let k2 = side_index(x, s2, *e).unwrap();
                        let iso = place_next(x, &AffineIso::identity(), s1, k1, s2, k2);
                        exact_angle(&v1, &iso.apply_vec(&v2))
                    }
                }
            })
        }
        Point::Square(s, _, _) => {
            let a = coords_in_square(x, *s, here).unwrap();
            let u = p2_sub(&coords_in_square(x, *s, prev).expect("carrier mismatch"), &a);
            let w = p2_sub(&coords_in_square(x, *s, next).expect("carrier mismatch"), &a);
            Ok(exact_angle(&u, &w))
        }
    }
}

/// Measures every interior breakpoint of the path. The ball must be deep
/// enough to certify the whole path.
pub fn local_geodesic_check(ball: &DevelopedBall, path: &PLPath) -> Result<GeodesicReport> {
    require_region(ball, path)?;
    let mut checks = Vec::new();
    for i in 1..path.points().len().saturating_sub(1) {
        checks.push(BreakCheck { index: i, link_dist: break_dist(ball, path, i)? });
    }
    Ok(GeodesicReport { checks })
}

/// True when every interior breakpoint opens exactly pi (within `eps`):
/// the path is a geodesic of the ambient plane development, not just a
/// local geodesic. Cone points with excess angle fail this.
pub fn r_geodesic_check(ball: &DevelopedBall, path: &PLPath, eps: f64) -> Result<bool> {
    let report = local_geodesic_check(ball, path)?;
    Ok(report.checks.iter().all(|c| (c.link_dist - PI).abs() <= eps))
}

/// Drops exact duplicates and merges collinear continuations. Vertex
/// breakpoints are never merged away.
pub(crate) fn normalize_points(x: &crate::complex::SquareComplex, pts: &[Point]) -> Result<PLPath> {
    let mut out: Vec<Point> = Vec::with_capacity(pts.len());
    for p in pts {
        if out.last() == Some(p) {
            continue;
        }
        out.push(p.clone());
        while out.len() >= 3 {
            let n = out.len();
            if mergeable(x, &out[n - 3], &out[n - 2], &out[n - 1]) {
                out.remove(n - 2);
            } else {
                break;
            }
        }
    }
    PLPath::new(x, out)
}

fn mergeable(x: &crate::complex::SquareComplex, a: &Point, b: &Point, c: &Point) -> bool {
    if matches!(b, Point::Vertex(_)) {
        return false;
    }
    let Some(c1) = super::segment_carrier(x, a, b) else { return false };
    let Some(c2) = super::segment_carrier(x, b, c) else { return false };
    match (c1, c2) {
        (Cell::Edge(e1), Cell::Edge(e2)) if e1 == e2 => {
            let ta = param_on_edge(x, e1, a).unwrap();
            let tb = param_on_edge(x, e1, b).unwrap();
            let tc = param_on_edge(x, e1, c).unwrap();
            (tb > ta) == (tc > tb)
        }
        (Cell::Square(s1), Cell::Square(s2)) if s1 == s2 => {
            let pa = coords_in_square(x, s1, a).unwrap();
            let pb = coords_in_square(x, s1, b).unwrap();
            let pc = coords_in_square(x, s1, c).unwrap();
            let u = p2_sub(&pb, &pa);
            let w = p2_sub(&pc, &pb);
            p2_cross(&u, &w).is_zero() && p2_dot(&u, &w).is_positive()
        }
        _ => false,
    }
}

/// Replaces the maximal vertex free stretch around breakpoint `i` by the
/// taut path through its sleeve of squares.
fn repair_run(ball: &DevelopedBall, cur: &PLPath, i: usize) -> Result<Vec<Point>> {
    let x = ball.ball();
    let pts = cur.points();

    // A bounce on a single edge has no sleeve; cutting the breakpoint is
    // already the taut replacement.
    if let (Cell::Edge(e1), Cell::Edge(e2)) = (cur.carrier(i - 1), cur.carrier(i)) {
        debug_assert_eq!(e1, e2);
        let mut out = pts.to_vec();
        out.remove(i);
        return Ok(out);
    }

    let rigid = |seg: usize| match cur.carrier(seg) {
        Cell::Edge(e) => x.squares_at_edge(e).is_empty(),
        _ => false,
    };
    let is_vertex = |p: &Point| matches!(p, Point::Vertex(_));

    let mut a = i;
    while a > 0 && !is_vertex(&pts[a]) && !rigid(a - 1) {
        a -= 1;
    }
    let mut b = i;
    while b + 1 < pts.len() && !is_vertex(&pts[b]) && !rigid(b) {
        b += 1;
    }
    debug_assert!(a < i && i < b, "a bent breakpoint must be interior to its stretch");

    // Assign every segment of the stretch to a square; edge riding
    // segments borrow a neighbor's square when they can.
    let mut sq: Vec<Option<SquareId>> = (a..b)
        .map(|seg| match cur.carrier(seg) {
            Cell::Square(s) => Some(s),
            _ => None,
        })
        .collect();
    for pass in 0..2 {
        for j in 0..sq.len() {
            if sq[j].is_some() {
                continue;
            }
            let Cell::Edge(e) = cur.carrier(a + j) else { unreachable!() };
            let neighbor = |k: usize| sq.get(k).copied().flatten();
            let adopt = [j.checked_sub(1).and_then(neighbor), neighbor(j + 1)]
                .into_iter()
                .flatten()
                .find(|&s| side_index(x, s, e).is_some());
            sq[j] = match adopt {
                Some(s) => Some(s),
                None if pass == 1 => Some(x.squares_at_edge(e)[0].0),
                None => None,
            };
        }
    }
    let sq: Vec<SquareId> = sq.into_iter().map(|s| s.unwrap()).collect();

    let mut squares = vec![sq[0]];
    let mut portals: Vec<EdgeId> = Vec::new();
    for j in 1..sq.len() {
        if sq[j] != sq[j - 1] {
            match &pts[a + j] {
                Point::Edge(e, _) => portals.push(*e),
                p => {
                    return Err(Error::DevelopmentFailed(format!(
                        "carrier change away from an edge breakpoint at {p:?}"
                    )))
                }
            }
            squares.push(sq[j]);
        }
    }

    let sleeve = Sleeve::new(x, squares, portals);
    let pulled = sleeve_pull(x, &sleeve, &pts[a], &pts[b])?;

    let mut out = pts[..a].to_vec();
    out.extend(pulled);
    out.extend_from_slice(&pts[b + 1..]);
    Ok(out)
}

/// Shrinks a fan endpoint toward the apex until it sits within radius one,
/// so the repair chord stays inside the fan's quarter disks.
fn trim_to_unit(p: &P2, apex: &P2) -> Option<P2> {
    let d = p2_sub(p, apex);
    let r2 = p2_len2(&d);
    if r2 <= Q::one() {
        return None;
    }
    let s = Q::new(BigInt::from(1), ceil_sqrt(&r2));
    Some(p2_add(apex, &p2_scale(&d, &s)))
}

/// Cuts the corner at a vertex breakpoint across the fan of squares along
/// the shortest link route.
fn repair_vertex(ball: &DevelopedBall, cur: &PLPath, i: usize, eps: f64) -> Result<Vec<Point>> {
    let x = ball.ball();
    let pts = cur.points();
    let Point::Vertex(v) = pts[i] else { unreachable!() };
    let l = link(x, v);
    let u = vertex_dir(x, &l, v, cur.carrier(i - 1), &pts[i - 1])?;
    let w = vertex_dir(x, &l, v, cur.carrier(i), &pts[i + 1])?;
    let route = link_route(&l, &u, &w);
    debug_assert!(route.dist < PI - eps);

    // Both segments leave along the same edge germ: cutting the vertex
    // leaves a plain edge segment.
    if let (LinkPos::Node(n1), LinkPos::Node(n2)) = (&u, &w) {
        if n1 == n2 {
            let mut out = pts.to_vec();
            out.remove(i);
            return Ok(out);
        }
    }

    // Fan corners along the route, and the germ nodes joining them.
    let mut items: Vec<usize> = Vec::new();
    if route.nodes.is_empty() {
        let LinkPos::Corner { corner, .. } = &u else {
            return Err(Error::DevelopmentFailed("empty link route between germ nodes".into()));
        };
        items.push(*corner);
    } else {
        if let LinkPos::Corner { corner, .. } = &u {
            items.push(*corner);
        }
        for pair in route.nodes.windows(2) {
            let c = l
                .corner_between(pair[0], pair[1])
                .expect("link route hops a missing corner");
            items.push(c);
        }
        if let LinkPos::Corner { corner, .. } = &w {
            items.push(*corner);
        }
    }
    let start = if matches!(u, LinkPos::Corner { .. }) { 0 } else { 1 };
    let joins = &route.nodes[start..start + items.len().saturating_sub(1)];

    let squares: Vec<SquareId> = items.iter().map(|&c| l.corner(c).square).collect();
    let portals: Vec<EdgeId> = joins.iter().map(|&n| l.node(n).0).collect();
    let sleeve = Sleeve::new(x, squares, portals);

    // Plane geometry of the fan: the apex is the shared image of v.
    let apex = corner_p2(l.corner(items[0]).k);
    let last = sleeve.len() - 1;
    let a_plane = sleeve
        .to_plane(x, 0, &pts[i - 1])
        .ok_or_else(|| Error::DevelopmentFailed("fan source off its first square".into()))?;
    let b_plane = sleeve
        .to_plane(x, last, &pts[i + 1])
        .ok_or_else(|| Error::DevelopmentFailed("fan target off its last square".into()))?;

    let mut out = pts[..i].to_vec();
    let a_trim = trim_to_unit(&a_plane, &apex);
    let b_trim = trim_to_unit(&b_plane, &apex);
    let a_cut = a_trim.clone().unwrap_or(a_plane);
    let b_cut = b_trim.clone().unwrap_or(b_plane);
    if let Some(t) = a_trim {
        out.push(sleeve.from_plane(x, 0, &t)?);
    }
    out.extend(chord_points(x, &sleeve, &a_cut, &b_cut, 0, last)?);
    if let Some(t) = b_trim {
        out.push(sleeve.from_plane(x, last, &t)?);
    }
    out.extend_from_slice(&pts[i + 1..]);
    Ok(out)
}

/// Straightens `path` into a local geodesic with the default repair
/// budget.
pub fn straighten(ball: &DevelopedBall, path: &PLPath, eps: f64) -> Result<PLPath> {
    straighten_budgeted(ball, path, eps, DEFAULT_REPAIR_BUDGET)
}

/// Straightens `path` into a local geodesic with the same endpoints,
/// applying at most `budget` repairs. Fails with `BallTooSmall` when a
/// repair would need cells beyond the certified region of the ball.
pub fn straighten_budgeted(
    ball: &DevelopedBall,
    path: &PLPath,
    eps: f64,
    budget: usize,
) -> Result<PLPath> {
    let x = ball.ball();
    let mut cur = normalize_points(x, path.points())?;
    require_region(ball, &cur)?;
    let mut repairs = 0usize;
    loop {
        let mut target = None;
        for i in 1..cur.points().len().saturating_sub(1) {
            if break_dist(ball, &cur, i)? < PI - eps {
                target = Some(i);
                break;
            }
        }
        let Some(i) = target else { return Ok(cur) };
        if repairs >= budget {
            return Err(Error::BudgetExceeded(1));
        }
        repairs += 1;
        let raw = match &cur.points()[i] {
            Point::Vertex(_) => repair_vertex(ball, &cur, i, eps)?,
            _ => repair_run(ball, &cur, i)?,
        };
        let next = normalize_points(x, &raw)?;
        require_region(ball, &next)?;
        if next == cur {
            return Err(Error::DevelopmentFailed(
                "straightening stalled at a bent breakpoint".into(),
            ));
        }
        cur = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::cover::{develop, from_simply_connected};
    use crate::rational::{q, qi};

    fn whole(x: crate::complex::SquareComplex, base: &str) -> DevelopedBall {
        let v = x.vertex_by_name(base).unwrap();
        from_simply_connected(&x, v).unwrap()
    }

    fn vp(ball: &DevelopedBall, name: &str) -> Point {
        Point::Vertex(ball.ball().vertex_by_name(name).unwrap())
    }

    #[test]
    fn l_path_straightens_to_the_exact_diagonal() {
        let ball = whole(corpus::grid(6), "v00x00");
        let x = ball.ball();
        let path = PLPath::new(
            x,
            vec![
                vp(&ball, "v00x00"),
                vp(&ball, "v01x00"),
                vp(&ball, "v02x00"),
                vp(&ball, "v03x00"),
                vp(&ball, "v03x01"),
                vp(&ball, "v03x02"),
            ],
        )
        .unwrap();
        let g = straighten(&ball, &path, 1e-9).unwrap();

        // The geodesic of the flat plane from (0,0) to (3,2).
        assert!((g.length() - 13f64.sqrt()).abs() < 1e-12);
        assert_eq!(g.points().len(), 5);
        assert_eq!(g.first(), path.first());
        assert_eq!(g.last(), path.last());
        assert!(r_geodesic_check(&ball, &g, 1e-9).unwrap());

        // Every crossing square sees the exact slope 2/3.
        for i in 0..g.n_segments() {
            let Cell::Square(s) = g.carrier(i) else {
                panic!("diagonal should cross square interiors")
            };
            let a = coords_in_square(x, s, &g.points()[i]).unwrap();
            let b = coords_in_square(x, s, &g.points()[i + 1]).unwrap();
            let d = p2_sub(&b, &a);
            assert!((&d.0 * qi(2) - &d.1 * qi(3)).is_zero(), "slope must be exactly 2/3");
        }
    }

    #[test]
    fn straight_paths_are_fixpoints() {
        let ball = whole(corpus::grid(4), "v00x00");
        let x = ball.ball();
        let diag = PLPath::new(
            x,
            vec![vp(&ball, "v00x00"), vp(&ball, "v01x01"), vp(&ball, "v02x02")],
        )
        .unwrap();
        let g = straighten(&ball, &diag, 1e-9).unwrap();
        assert_eq!(g.points(), diag.points());

        let report = local_geodesic_check(&ball, &diag).unwrap();
        assert!(report.passes(1e-9));
        assert_eq!(report.checks.len(), 1);
        assert!((report.checks[0].link_dist - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn right_angle_at_a_vertex_becomes_one_diagonal() {
        let ball = whole(corpus::grid(2), "v00x00");
        let x = ball.ball();
        let path = PLPath::new(
            x,
            vec![vp(&ball, "v00x00"), vp(&ball, "v01x00"), vp(&ball, "v01x01")],
        )
        .unwrap();

        let report = local_geodesic_check(&ball, &path).unwrap();
        assert!(!report.passes(1e-9));
        assert!((report.worst().unwrap().link_dist - std::f64::consts::FRAC_PI_2).abs() < 1e-12);

        let g = straighten(&ball, &path, 1e-9).unwrap();
        assert_eq!(g.points(), &[vp(&ball, "v00x00"), vp(&ball, "v01x01")]);
        assert_eq!(g.seg_len2(0), &qi(2));
    }

    #[test]
    fn bounces_collapse_onto_their_edge() {
        let ball = whole(corpus::grid(2), "v00x00");
        let x = ball.ball();
        let e = x.edge_by_name("h00x00").unwrap();
        let path = PLPath::new(
            x,
            vec![
                Point::on_edge(x, e, q(1, 4)).unwrap(),
                Point::on_edge(x, e, q(3, 4)).unwrap(),
                Point::on_edge(x, e, q(1, 2)).unwrap(),
            ],
        )
        .unwrap();
        let g = straighten(&ball, &path, 1e-9).unwrap();
        assert_eq!(g.n_segments(), 1);
        assert_eq!(g.seg_len2(0), &q(1, 16));
    }

    #[test]
    fn collinear_subdivisions_merge() {
        let ball = whole(corpus::grid(2), "v00x00");
        let x = ball.ball();
        let s = x.square_by_name("s00x00").unwrap();
        let path = PLPath::new(
            x,
            vec![
                vp(&ball, "v00x00"),
                Point::in_square(x, s, q(1, 2), q(1, 2)).unwrap(),
                vp(&ball, "v01x01"),
            ],
        )
        .unwrap();
        let g = straighten(&ball, &path, 1e-9).unwrap();
        assert_eq!(g.n_segments(), 1);
        assert_eq!(g.seg_len2(0), &qi(2));
    }

    #[test]
    fn cone_paths_pass_locally_but_are_not_plane_geodesics() {
        let ball = whole(corpus::fake_disk(2), corpus::FAKE_DISK_CONE);
        let x = ball.ball();
        let path = PLPath::new(
            x,
            vec![
                vp(&ball, "ray0t02"),
                vp(&ball, "ray0t01"),
                vp(&ball, corpus::FAKE_DISK_CONE),
                vp(&ball, "sh2v01x01"),
                vp(&ball, "sh2v02x02"),
            ],
        )
        .unwrap();
        let report = local_geodesic_check(&ball, &path).unwrap();
        assert!(report.passes(1e-9));
        // Straight along the ray and straight through the sheet, with the
        // whole excess measured at the cone point.
        assert!((report.checks[0].link_dist - PI).abs() < 1e-12);
        assert!((report.checks[1].link_dist - 1.25 * PI).abs() < 1e-12);
        assert!((report.checks[2].link_dist - PI).abs() < 1e-12);

        // Locally geodesic, hence a straightening fixpoint, but the excess
        // angle means it is not a plane geodesic.
        let g = straighten(&ball, &path, 1e-9).unwrap();
        assert_eq!(g.points(), path.points());
        assert!(!r_geodesic_check(&ball, &path, 1e-9).unwrap());
    }

    #[test]
    fn budget_zero_still_accepts_straight_input() {
        let ball = whole(corpus::grid(2), "v00x00");
        let x = ball.ball();
        let diag = PLPath::new(x, vec![vp(&ball, "v00x00"), vp(&ball, "v01x01")]).unwrap();
        assert!(straighten_budgeted(&ball, &diag, 1e-9, 0).is_ok());

        let bent = PLPath::new(
            x,
            vec![vp(&ball, "v00x00"), vp(&ball, "v01x00"), vp(&ball, "v01x01")],
        )
        .unwrap();
        assert!(matches!(
            straighten_budgeted(&ball, &bent, 1e-9, 0),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn paths_reaching_incomplete_vertices_are_refused() {
        // A two edge step walk out of the center that turns through a square
        // corner, built the same way against any development of the torus.
        fn two_step_turn(ball: &DevelopedBall) -> Vec<Point> {
            let b = ball.ball();
            let c = ball.center();
            let (e0, _) = b.edges_at(c)[0];
            let v1 = b.edge_ends(e0).into_iter().find(|&v| v != c).unwrap();
            let l = crate::links::link(b, v1);
            let back = l.node_of(e0, b.end_at(e0, v1)).unwrap();
            let (e1, end) = (0..l.n_nodes())
                .find(|&n| n != back && l.corner_between(back, n).is_some())
                .map(|n| l.node(n))
                .unwrap();
            let v2 = b.edge_end(e1, end.flip());
            vec![Point::Vertex(c), Point::Vertex(v1), Point::Vertex(v2)]
        }

        let x = corpus::torus3x3();
        let center = x.vertex_by_name("v00x00").unwrap();

        // At radius 3 the far vertex sits at depth 2 and certifying geometry
        // there would need radius 4, so the walk is refused outright.
        let ball = develop(&x, center, 3).unwrap();
        let path = PLPath::new(ball.ball(), two_step_turn(&ball)).unwrap();
        assert!(matches!(
            straighten(&ball, &path, 1e-9),
            Err(Error::BallTooSmall { needed: 4, .. })
        ));

        // The same turn deep inside a bigger ball straightens to the diagonal.
        let ball = develop(&x, center, 5).unwrap();
        let path = PLPath::new(ball.ball(), two_step_turn(&ball)).unwrap();
        let g = straighten(&ball, &path, 1e-9).unwrap();
        assert!(local_geodesic_check(&ball, &g).unwrap().passes(1e-9));
        assert!((g.length() - 2f64.sqrt()).abs() < 1e-12);
    }
}
