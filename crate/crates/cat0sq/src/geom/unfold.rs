//! Planar development of sleeves of squares, and taut paths inside them.
//!
//! A sleeve is a sequence of squares glued along consecutive shared edges.
//! Developing it places every square as an axis aligned unit box in the
//! plane (the gluing isometries are signed permutation matrices), so
//! clipping a chord against a square is exact rational interval
//! arithmetic, and the taut path through the sleeve comes from a funnel
//! scan whose orientation tests are exact cross products.

use num::{BigInt, One, Signed, Zero};

use super::{coords_in_square, corner_p2, p2_cross, p2_lerp, p2_sub, Point, P2};
use crate::complex::{SquareChain, SquareComplex};
use crate::error::{Error, Result};
use crate::ids::{EdgeId, SquareId, VertexId};
use crate::rational::{q, Q};

fn iscale(k: i64, v: &Q) -> Q {
    Q::from_integer(BigInt::from(k)) * v
}

fn corner_i(k: u8) -> (i64, i64) {
    let (x, y) = SquareChain::CORNER_POS[k as usize % 4];
    (x as i64, y as i64)
}

/// Inward unit normal of side `k` in the square's own frame.
fn inward(k: u8) -> (i64, i64) {
    match k % 4 {
        0 => (0, 1),
        1 => (-1, 0),
        2 => (0, -1),
        _ => (1, 0),
    }
}

/// Index of the side of `s` carried by edge `e`.
pub(crate) fn side_index(x: &SquareComplex, s: SquareId, e: EdgeId) -> Option<u8> {
    (0..4).find(|&k| x.side_edge(s, k) == e)
}

/// An isometry of the plane sending a square frame to its developed
/// position: a signed permutation matrix plus a rational translation.
#[derive(Clone, Debug)]
pub(crate) struct AffineIso {
    m: [[i64; 2]; 2],
    t: P2,
}

impl AffineIso {
    pub(crate) fn identity() -> AffineIso {
        AffineIso { m: [[1, 0], [0, 1]], t: (Q::zero(), Q::zero()) }
    }

    pub(crate) fn apply(&self, p: &P2) -> P2 {
        (
            iscale(self.m[0][0], &p.0) + iscale(self.m[0][1], &p.1) + &self.t.0,
            iscale(self.m[1][0], &p.0) + iscale(self.m[1][1], &p.1) + &self.t.1,
        )
    }

    /// Linear part only, for transporting direction vectors.
    pub(crate) fn apply_vec(&self, v: &P2) -> P2 {
        (
            iscale(self.m[0][0], &v.0) + iscale(self.m[0][1], &v.1),
            iscale(self.m[1][0], &v.0) + iscale(self.m[1][1], &v.1),
        )
    }

    fn apply_int_vec(&self, v: (i64, i64)) -> (i64, i64) {
        (
            self.m[0][0] * v.0 + self.m[0][1] * v.1,
            self.m[1][0] * v.0 + self.m[1][1] * v.1,
        )
    }

    /// Inverse isometry; the linear part is orthogonal so its inverse is
    /// its transpose.
    pub(crate) fn inverse(&self) -> AffineIso {
        let m = [[self.m[0][0], self.m[1][0]], [self.m[0][1], self.m[1][1]]];
        let t = (
            -(iscale(m[0][0], &self.t.0) + iscale(m[0][1], &self.t.1)),
            -(iscale(m[1][0], &self.t.0) + iscale(m[1][1], &self.t.1)),
        );
        AffineIso { m, t }
    }
}

/// Placement of square `s_j` across side `k_i` of an already placed square
/// `s_i`: the shared edge's endpoints land on the same plane points and
/// the new square opens on the far side.
pub(crate) fn place_next(
    x: &SquareComplex,
    prev: &AffineIso,
    s_i: SquareId,
    k_i: u8,
    s_j: SquareId,
    k_j: u8,
) -> AffineIso {
    debug_assert_eq!(x.side_edge(s_i, k_i), x.side_edge(s_j, k_j));
    let va = x.corner_vertex(s_i, k_i);
    let vb = x.corner_vertex(s_i, (k_i + 1) % 4);

    // Plane direction of the shared edge and the outward normal demand.
    let ci = corner_i(k_i);
    let ci1 = corner_i(k_i + 1);
    let d_plane = prev.apply_int_vec((ci1.0 - ci.0, ci1.1 - ci.1));
    let n_i = prev.apply_int_vec(inward(k_i));
    let n_plane = (-n_i.0, -n_i.1);

    // Side k_j of s_j traverses the same edge, maybe reversed.
    let (qa, d_j) = {
        let cj = corner_i(k_j);
        let cj1 = corner_i(k_j + 1);
        if x.corner_vertex(s_j, k_j) == va {
            debug_assert_eq!(x.corner_vertex(s_j, (k_j + 1) % 4), vb);
            (cj, (cj1.0 - cj.0, cj1.1 - cj.1))
        } else {
            debug_assert_eq!(x.corner_vertex(s_j, k_j), vb);
            debug_assert_eq!(x.corner_vertex(s_j, (k_j + 1) % 4), va);
            (cj1, (cj.0 - cj1.0, cj.1 - cj1.1))
        }
    };
    let n_j = inward(k_j);

    // The unique orthogonal map with m d_j = d_plane and m n_j = n_plane:
    // the outer product expansion over the orthonormal pair (d_j, n_j).
    let m = [
        [
            d_plane.0 * d_j.0 + n_plane.0 * n_j.0,
            d_plane.0 * d_j.1 + n_plane.0 * n_j.1,
        ],
        [
            d_plane.1 * d_j.0 + n_plane.1 * n_j.0,
            d_plane.1 * d_j.1 + n_plane.1 * n_j.1,
        ],
    ];

    // Translation: corner qa of s_j must land on the image of va.
    let pa = prev.apply(&corner_p2(k_i));
    let lin = (
        iscale(m[0][0], &Q::from_integer(qa.0.into())) + iscale(m[0][1], &Q::from_integer(qa.1.into())),
        iscale(m[1][0], &Q::from_integer(qa.0.into())) + iscale(m[1][1], &Q::from_integer(qa.1.into())),
    );
    AffineIso { m, t: (pa.0 - lin.0, pa.1 - lin.1) }
}

/// A developed sleeve: squares, their plane placements, and the shared
/// edges between consecutive squares.
pub(crate) struct Sleeve {
    squares: Vec<SquareId>,
    isos: Vec<AffineIso>,
    portal_edges: Vec<EdgeId>,
}

impl Sleeve {
    pub(crate) fn new(x: &SquareComplex, squares: Vec<SquareId>, portal_edges: Vec<EdgeId>) -> Sleeve {
        assert_eq!(portal_edges.len() + 1, squares.len());
        let mut isos = vec![AffineIso::identity()];
        for (i, &e) in portal_edges.iter().enumerate() {
            let k_i = side_index(x, squares[i], e).expect("portal edge off its square");
            let k_j = side_index(x, squares[i + 1], e).expect("portal edge off its square");
            let next = place_next(x, &isos[i], squares[i], k_i, squares[i + 1], k_j);
            isos.push(next);
        }
        Sleeve { squares, isos, portal_edges }
    }

    pub(crate) fn len(&self) -> usize {
        self.squares.len()
    }

    #[cfg(test)]
    fn iso(&self, i: usize) -> &AffineIso {
        &self.isos[i]
    }

    /// Plane position of a point in the closure of square `i`.
    pub(crate) fn to_plane(&self, x: &SquareComplex, i: usize, p: &Point) -> Option<P2> {
        coords_in_square(x, self.squares[i], p).map(|c| self.isos[i].apply(&c))
    }

    /// Point of the complex at a plane position inside box `i`.
    pub(crate) fn from_plane(&self, x: &SquareComplex, i: usize, pp: &P2) -> Result<Point> {
        let (cx, cy) = self.isos[i].inverse().apply(pp);
        Point::in_square(x, self.squares[i], cx, cy)
    }

    /// Axis aligned bounds of developed square `i`.
    fn box_of(&self, i: usize) -> (P2, P2) {
        let a = self.isos[i].apply(&(Q::zero(), Q::zero()));
        let b = self.isos[i].apply(&(Q::one(), Q::one()));
        (
            (a.0.clone().min(b.0.clone()), a.1.clone().min(b.1.clone())),
            (a.0.max(b.0), a.1.max(b.1)),
        )
    }

    fn centroid(&self, i: usize) -> P2 {
        self.isos[i].apply(&(q(1, 2), q(1, 2)))
    }

    /// Endpoints of portal `i` (between boxes i-1 and i) in the plane,
    /// with their vertices.
    fn portal(&self, x: &SquareComplex, i: usize) -> [(P2, VertexId); 2] {
        let e = self.portal_edges[i - 1];
        let s = self.squares[i - 1];
        let k = side_index(x, s, e).unwrap();
        let va = x.corner_vertex(s, k);
        let vb = x.corner_vertex(s, (k + 1) % 4);
        let pa = self.isos[i - 1].apply(&corner_p2(k));
        let pb = self.isos[i - 1].apply(&corner_p2(k + 1));
        [(pa, va), (pb, vb)]
    }
}

/// Parameter interval in [0, 1] where the segment `p + t d` meets the box,
/// by rational Liang-Barsky clipping. The interval may be a single point.
fn clip_box(p: &P2, d: &P2, bmin: &P2, bmax: &P2) -> Option<(Q, Q)> {
    let mut t0 = Q::zero();
    let mut t1 = Q::one();
    for (pa, da, lo, hi) in [
        (&p.0, &d.0, &bmin.0, &bmax.0),
        (&p.1, &d.1, &bmin.1, &bmax.1),
    ] {
        if da.is_zero() {
            if pa < lo || pa > hi {
                return None;
            }
        } else {
            let ta = (lo - pa) / da;
            let tb = (hi - pa) / da;
            let (a, b) = if ta <= tb { (ta, tb) } else { (tb, ta) };
            t0 = t0.max(a);
            t1 = t1.min(b);
            if t0 > t1 {
                return None;
            }
        }
    }
    Some((t0, t1))
}

/// Interior breakpoints of the chord from `a` to `b` walked through boxes
/// `first..=last` of the sleeve, in normal form. The chord must stay
/// inside the union of those boxes.
pub(crate) fn chord_points(
    x: &SquareComplex,
    sleeve: &Sleeve,
    a: &P2,
    b: &P2,
    first: usize,
    last: usize,
) -> Result<Vec<Point>> {
    let d = p2_sub(b, a);
    let mut out = Vec::new();
    let mut prev_t = Q::zero();
    for i in first..last {
        let (bmin, bmax) = sleeve.box_of(i);
        let (_, tout) = clip_box(a, &d, &bmin, &bmax).ok_or_else(|| {
            Error::DevelopmentFailed("taut chord left its sleeve".into())
        })?;
        if tout <= prev_t || tout >= Q::one() {
            continue;
        }
        let pt = p2_lerp(a, b, &tout);
        out.push(sleeve.from_plane(x, i, &pt)?);
        prev_t = tout;
    }
    Ok(out)
}

/// Taut path through a sleeve from `p` (in square 0) to `q` (in the last
/// square): the full breakpoint list including both endpoints.
pub(crate) fn sleeve_pull(x: &SquareComplex, sleeve: &Sleeve, p: &Point, q: &Point) -> Result<Vec<Point>> {
    let m = sleeve.len();
    let s_pt = sleeve
        .to_plane(x, 0, p)
        .ok_or_else(|| Error::Domain("sleeve source off its first square".into()))?;
    let t_pt = sleeve
        .to_plane(x, m - 1, q)
        .ok_or_else(|| Error::Domain("sleeve target off its last square".into()))?;

    // Funnel corners: plane point, portal index, vertex for apex points.
    let mut corners: Vec<(P2, usize, Option<VertexId>)> = vec![(s_pt.clone(), 0, None)];
    let area = |a: &P2, b: &P2, c: &P2| p2_cross(&p2_sub(b, a), &p2_sub(c, a));

    let mut apex = s_pt.clone();
    let mut left = (s_pt.clone(), 0usize, None::<VertexId>);
    let mut right = (s_pt, 0usize, None::<VertexId>);

    let mut i = 1usize;
    while i <= m {
        let (l, r) = if i < m {
            let [(pa, va), (pb, vb)] = sleeve.portal(x, i);
            // Orient by the crossing direction between box centroids.
            let w = p2_sub(&sleeve.centroid(i), &sleeve.centroid(i - 1));
            let mid = p2_lerp(&pa, &pb, &crate::rational::q(1, 2));
            if p2_cross(&w, &p2_sub(&pa, &mid)).is_positive() {
                ((pa, i, Some(va)), (pb, i, Some(vb)))
            } else {
                ((pb, i, Some(vb)), (pa, i, Some(va)))
            }
        } else {
            ((t_pt.clone(), m, None), (t_pt.clone(), m, None))
        };

        // Tighten the right boundary.
        if !area(&apex, &right.0, &r.0).is_negative() {
            if apex == right.0 || apex == left.0 || r.0 == apex || area(&apex, &left.0, &r.0).is_negative() {
                right = r;
            } else {
                // The right boundary crossed the left: the left corner is
                // the next taut breakpoint.
                corners.push(left.clone());
                apex = left.0.clone();
                let ai = left.1;
                left = (apex.clone(), ai, left.2);
                right = (apex.clone(), ai, None);
                i = ai + 1;
                continue;
            }
        }

        // Tighten the left boundary.
        if !area(&apex, &left.0, &l.0).is_positive() {
            if apex == left.0 || apex == right.0 || l.0 == apex || area(&apex, &right.0, &l.0).is_positive() {
                left = l;
            } else {
                corners.push(right.clone());
                apex = right.0.clone();
                let ai = right.1;
                right = (apex.clone(), ai, right.2);
                left = (apex.clone(), ai, None);
                i = ai + 1;
                continue;
            }
        }

        i += 1;
    }
    corners.push((t_pt, m, None));

    // Convert the taut polyline back to points of the complex, inserting
    // the square crossings along every chord.
    let mut pts: Vec<Point> = vec![p.clone()];
    let push = |pt: Point, pts: &mut Vec<Point>| {
        if pts.last() != Some(&pt) {
            pts.push(pt);
        }
    };
    for w in corners.windows(2) {
        let (ref a, ai, _) = w[0];
        let (ref b, bi, ref vb) = w[1];
        let first = ai.min(m - 1);
        let last = (bi.saturating_sub(1)).min(m - 1);
        for pt in chord_points(x, sleeve, a, b, first, last)? {
            push(pt, &mut pts);
        }
        let endpoint = match vb {
            Some(v) => Point::Vertex(*v),
            None => q.clone(),
        };
        push(endpoint, &mut pts);
    }
    Ok(pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::rational::qi;

    fn sid(x: &SquareComplex, n: &str) -> SquareId {
        x.square_by_name(n).unwrap()
    }

    fn eid(x: &SquareComplex, n: &str) -> EdgeId {
        x.edge_by_name(n).unwrap()
    }

    #[test]
    fn grid_row_unfolds_by_translation() {
        let x = corpus::grid(3);
        let sleeve = Sleeve::new(
            &x,
            vec![sid(&x, "s00x00"), sid(&x, "s01x00"), sid(&x, "s02x00")],
            vec![eid(&x, "u01x00"), eid(&x, "u02x00")],
        );
        let origin = (Q::zero(), Q::zero());
        assert_eq!(sleeve.iso(1).apply(&origin), (qi(1), qi(0)));
        assert_eq!(sleeve.iso(2).apply(&origin), (qi(2), qi(0)));
        // Round trip through the inverse.
        let p = (q(5, 4), q(1, 3));
        let back = sleeve.iso(1).inverse().apply(&sleeve.iso(1).apply(&p));
        assert_eq!(back, p);
    }

    #[test]
    fn every_two_square_development_is_consistent() {
        // Whatever the corner chains do, the shared edge must develop to
        // the same plane segment from both sides and the two boxes must
        // open in opposite directions.
        for x in [corpus::grid(2), corpus::torus3x3(), corpus::fake_disk(2)] {
            for e in x.edge_ids() {
                let squares = x.squares_at_edge(e);
                if squares.len() != 2 {
                    continue;
                }
                let (s0, _) = squares[0];
                let (s1, _) = squares[1];
                let sleeve = Sleeve::new(&x, vec![s0, s1], vec![e]);
                let k0 = side_index(&x, s0, e).unwrap();
                let k1 = side_index(&x, s1, e).unwrap();
                for ka in [k0, (k0 + 1) % 4] {
                    let v = x.corner_vertex(s0, ka);
                    let kb = (0..4).find(|&k| x.corner_vertex(s1, k) == v).unwrap();
                    assert_eq!(
                        sleeve.iso(0).apply(&corner_p2(ka)),
                        sleeve.iso(1).apply(&corner_p2(kb)),
                        "corner mismatch across edge"
                    );
                }
                let n0 = sleeve.iso(0).apply_int_vec(inward(k0));
                let n1 = sleeve.iso(1).apply_int_vec(inward(k1));
                assert_eq!((n0.0 + n1.0, n0.1 + n1.1), (0, 0), "normals must oppose");
            }
        }
    }

    #[test]
    fn straight_corridor_pull_crosses_portals() {
        let x = corpus::grid(3);
        let sleeve = Sleeve::new(
            &x,
            vec![sid(&x, "s00x00"), sid(&x, "s01x00"), sid(&x, "s02x00")],
            vec![eid(&x, "u01x00"), eid(&x, "u02x00")],
        );
        let p = Point::in_square(&x, sid(&x, "s00x00"), q(1, 2), q(1, 2)).unwrap();
        let qq = Point::in_square(&x, sid(&x, "s02x00"), q(1, 2), q(1, 2)).unwrap();
        let pts = sleeve_pull(&x, &sleeve, &p, &qq).unwrap();
        assert_eq!(
            pts,
            vec![
                p.clone(),
                Point::Edge(eid(&x, "u01x00"), q(1, 2)),
                Point::Edge(eid(&x, "u02x00"), q(1, 2)),
                qq.clone(),
            ]
        );
    }

    #[test]
    fn bent_corridor_pull_pivots_on_the_inner_corner() {
        let x = corpus::grid(2);
        let sleeve = Sleeve::new(
            &x,
            vec![sid(&x, "s00x00"), sid(&x, "s01x00"), sid(&x, "s01x01")],
            vec![eid(&x, "u01x00"), eid(&x, "h01x01")],
        );
        // The straight chord would leave the sleeve, so the taut path
        // pivots on the corner vertex shared by all three squares.
        let p = Point::in_square(&x, sid(&x, "s00x00"), q(1, 2), q(1, 10)).unwrap();
        let qq = Point::in_square(&x, sid(&x, "s01x01"), q(1, 10), q(9, 10)).unwrap();
        let pts = sleeve_pull(&x, &sleeve, &p, &qq).unwrap();
        assert_eq!(
            pts,
            vec![
                p.clone(),
                Point::Vertex(x.vertex_by_name("v01x01").unwrap()),
                qq.clone(),
            ]
        );

        // A target deeper in the last box keeps the path straight through
        // both portals instead.
        let qq2 = Point::in_square(&x, sid(&x, "s01x01"), q(9, 10), q(1, 2)).unwrap();
        let pts = sleeve_pull(&x, &sleeve, &p, &qq2).unwrap();
        assert_eq!(pts.len(), 4);
        assert!(matches!(pts[1], Point::Edge(e, _) if e == eid(&x, "u01x00")));
        assert!(matches!(pts[2], Point::Edge(e, _) if e == eid(&x, "h01x01")));
    }

    #[test]
    fn clip_box_intervals_are_exact() {
        let bmin = (qi(0), qi(0));
        let bmax = (qi(1), qi(1));
        // Diagonal through the box.
        let (t0, t1) = clip_box(&(q(-1, 2), q(-1, 2)), &(qi(2), qi(2)), &bmin, &bmax).unwrap();
        assert_eq!((t0, t1), (q(1, 4), q(3, 4)));
        // Riding along the top side.
        let (t0, t1) = clip_box(&(qi(-1), qi(1)), &(qi(2), qi(0)), &bmin, &bmax).unwrap();
        assert_eq!((t0, t1), (q(1, 2), qi(1)));
        // Missing entirely.
        assert!(clip_box(&(qi(-1), qi(2)), &(qi(2), qi(0)), &bmin, &bmax).is_none());
    }
}
