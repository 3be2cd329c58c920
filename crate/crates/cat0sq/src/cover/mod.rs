//! Balls of the universal cover.
//!
//! `develop` grows the ball of 1-skeleton radius R around a lift of a base
//! vertex. The gluing is the minimal one forced by corner chains: squares
//! are lifted atomically around each completed vertex, and an edge germ
//! (vertex, base edge, base end) is lifted at most once, which performs all
//! the identifications a covering space demands.
//!
//! Contents of the ball: every cover vertex at hop depth ≤ R, every edge
//! with an endpoint at depth ≤ R−1, every square around a vertex of depth
//! ≤ R−2. Because the 1-skeleton of a simply connected square complex is
//! bipartite (its cycle space is spanned by square boundaries), this is
//! exactly the subcomplex induced on depths ≤ R.
//!
//! A vertex of depth ≤ R−2 therefore sees its entire cover neighborhood:
//! its link in the ball is isomorphic (via the covering) to the base link.
//! That "complete" flag is what the geometry modules consult before they
//! trust any local computation; the construction re-verifies it at the end
//! rather than assuming the development logic is right.

mod curvature;
mod sector;

pub use curvature::{curvature_account, CurvatureAccount};
pub use sector::{
    classify_direction, detect_sector, scan_sectors, singular_spacing_check, Chart,
    DirectionClass, SectorKind, SectorPattern, SpacingReport,
};

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::complex::{
    identity_map, is_isomorphism, links_agree, verify_map, CellularMap, ComplexBuilder,
    SquareComplex, D4,
};
use crate::error::{Error, Result};
use crate::ids::{EdgeId, End, SquareId, VertexId};
use crate::links::check_npc;

/// A developed ball of the universal cover, with its covering map back to
/// the base complex.
#[derive(Clone, Debug)]
pub struct DevelopedBall {
    ball: SquareComplex,
    base: SquareComplex,
    center: VertexId,
    radius: usize,
    covering: CellularMap,
    depth: Vec<usize>,
    /// True when the ball IS the whole (simply connected) base complex, so
    /// no cell is truncated and every link is final.
    whole: bool,
}

impl DevelopedBall {
    pub fn ball(&self) -> &SquareComplex {
        &self.ball
    }

    pub fn base(&self) -> &SquareComplex {
        &self.base
    }

    pub fn center(&self) -> VertexId {
        self.center
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn covering(&self) -> &CellularMap {
        &self.covering
    }

    pub fn is_whole(&self) -> bool {
        self.whole
    }

    /// Hop distance from the center.
    pub fn depth(&self, v: VertexId) -> usize {
        self.depth[v.index()]
    }

    pub fn max_depth(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    /// Whether every cover cell around `v` is present in the ball.
    pub fn complete_vertex(&self, v: VertexId) -> bool {
        self.whole || self.depth(v) + 2 <= self.radius
    }

    /// Whether both cover squares along `e` are present in the ball.
    pub fn complete_edge(&self, e: EdgeId) -> bool {
        let [a, b] = self.ball.edge_ends(e);
        self.whole || self.depth(a).min(self.depth(b)) + 2 <= self.radius
    }

    pub fn require_vertex_complete(&self, v: VertexId) -> Result<()> {
        if self.complete_vertex(v) {
            Ok(())
        } else {
            Err(Error::BallTooSmall {
                achieved: self.radius,
                needed: self.depth(v) + 2,
            })
        }
    }

    pub fn require_edge_complete(&self, e: EdgeId) -> Result<()> {
        if self.complete_edge(e) {
            Ok(())
        } else {
            let [a, b] = self.ball.edge_ends(e);
            Err(Error::BallTooSmall {
                achieved: self.radius,
                needed: self.depth(a).min(self.depth(b)) + 2,
            })
        }
    }
}

/// Scratch state of a development in progress. Cells are dense indices;
/// every dev cell remembers its base cell, with identity corner alignment
/// by construction.
struct Dev<'a> {
    base: &'a SquareComplex,
    verts: Vec<(VertexId, usize)>,
    edges: Vec<(EdgeId, [usize; 2])>,
    squares: Vec<(SquareId, [usize; 4], [usize; 4])>,
    germs: BTreeMap<(usize, EdgeId, End), usize>,
    corners_done: BTreeMap<(usize, SquareId, u8), usize>,
}

impl<'a> Dev<'a> {
    fn new(base: &'a SquareComplex, center: VertexId) -> Dev<'a> {
        Dev {
            base,
            verts: vec![(center, 0)],
            edges: Vec::new(),
            squares: Vec::new(),
            germs: BTreeMap::new(),
            corners_done: BTreeMap::new(),
        }
    }

    fn far(&self, e: usize, v: usize) -> usize {
        let [a, b] = self.edges[e].1;
        if a == v {
            b
        } else {
            debug_assert_eq!(b, v);
            a
        }
    }

    fn fail(&self, msg: impl Into<String>) -> Error {
        Error::DevelopmentFailed(msg.into())
    }

    /// Creates the dev edge carrying base germ (`dv`, `be`, `bend`) toward
    /// the existing vertex `fv`, registering the germ at both ends.
    fn new_edge(&mut self, dv: usize, be: EdgeId, bend: End, fv: usize) -> Result<usize> {
        let ends = match bend {
            End::Zero => [dv, fv],
            End::One => [fv, dv],
        };
        let idx = self.edges.len();
        self.edges.push((be, ends));
        if self.germs.insert((dv, be, bend), idx).is_some()
            || self.germs.insert((fv, be, bend.flip()), idx).is_some()
        {
            return Err(self.fail(format!(
                "edge germ of {be:?} lifted twice at one vertex"
            )));
        }
        Ok(idx)
    }

    /// Lift of the germ (`dv`, `be`, `bend`), creating a fresh far vertex
    /// one layer deeper when the germ is new.
    fn lift_edge(&mut self, dv: usize, be: EdgeId, bend: End) -> Result<usize> {
        if let Some(&e) = self.germs.get(&(dv, be, bend)) {
            return Ok(e);
        }
        let far_base = self.base.edge_end(be, bend.flip());
        let depth = self.verts[dv].1 + 1;
        let fv = self.verts.len();
        self.verts.push((far_base, depth));
        self.new_edge(dv, be, bend, fv)
    }

    /// Lift of the germ with a prescribed far vertex: verifies an existing
    /// lift, or joins the two vertices with a new edge.
    fn lift_edge_to(&mut self, dv: usize, be: EdgeId, bend: End, fv: usize) -> Result<usize> {
        if let Some(&e) = self.germs.get(&(dv, be, bend)) {
            if self.far(e, dv) != fv {
                return Err(self.fail(format!(
                    "square closure disagrees with an existing lift of {be:?}"
                )));
            }
            return Ok(e);
        }
        self.new_edge(dv, be, bend, fv)
    }

    /// Lifts the base square `bs` so that its corner `k` sits at `dv`,
    /// walking the boundary chain with germ reuse. No-op if this corner is
    /// already realized.
    fn realize_corner(&mut self, dv: usize, bs: SquareId, k: u8) -> Result<()> {
        if self.corners_done.contains_key(&(dv, bs, k)) {
            return Ok(());
        }
        let base = self.base;
        let chain = *base.square(bs);
        let idx = |i: u8| ((k + i) % 4) as usize;
        debug_assert_eq!(chain.corners[idx(0)], self.verts[dv].0);
        let end_of =
            |side: usize, corner: usize| base.end_at(chain.sides[side], chain.corners[corner]);

        let e_out = self.lift_edge(dv, chain.sides[idx(0)], end_of(idx(0), idx(0)))?;
        let v1 = self.far(e_out, dv);
        let e_in = self.lift_edge(dv, chain.sides[idx(3)], end_of(idx(3), idx(0)))?;
        let v3 = self.far(e_in, dv);
        let e2 = self.lift_edge(v1, chain.sides[idx(1)], end_of(idx(1), idx(1)))?;
        let v2 = self.far(e2, v1);
        let e3 = self.lift_edge_to(v3, chain.sides[idx(2)], end_of(idx(2), idx(3)), v2)?;

        let mut corners = [0usize; 4];
        let mut sides = [0usize; 4];
        corners[idx(0)] = dv;
        corners[idx(1)] = v1;
        corners[idx(2)] = v2;
        corners[idx(3)] = v3;
        sides[idx(0)] = e_out;
        sides[idx(1)] = e2;
        sides[idx(2)] = e3;
        sides[idx(3)] = e_in;
        let sq = self.squares.len();
        self.squares.push((bs, corners, sides));
        for j in 0..4u8 {
            if self
                .corners_done
                .insert((corners[j as usize], bs, j), sq)
                .is_some()
            {
                return Err(self.fail(format!("{bs:?} realized twice around one vertex")));
            }
        }
        Ok(())
    }

    /// Realizes every base germ and every base corner at `dv`.
    fn complete_vertex(&mut self, dv: usize) -> Result<()> {
        let bv = self.verts[dv].0;
        for &(be, bend) in self.base.edges_at(bv) {
            self.lift_edge(dv, be, bend)?;
        }
        for &(bs, k) in self.base.corners_at(bv) {
            self.realize_corner(dv, bs, k)?;
        }
        Ok(())
    }

    fn layer(&self, d: usize) -> Vec<usize> {
        (0..self.verts.len())
            .filter(|&i| self.verts[i].1 == d)
            .collect()
    }
}

/// Develops the radius-R ball of the universal cover of `base` around a
/// lift of `center`. Requires an NPC base and R ≥ 1.
pub fn develop(base: &SquareComplex, center: VertexId, radius: usize) -> Result<DevelopedBall> {
    if radius < 1 {
        return Err(Error::Domain("development radius must be at least 1".into()));
    }
    if let Err(w) = check_npc(base) {
        return Err(Error::Curvature {
            vertex: w.vertex,
            cycle_len: w.cycle.len(),
        });
    }

    let mut dev = Dev::new(base, center);
    if radius >= 2 {
        for d in 0..=radius - 2 {
            for dv in dev.layer(d) {
                dev.complete_vertex(dv)?;
            }
        }
    }
    // Edge germs at the last interior layer, creating the rim vertices.
    for dv in dev.layer(radius - 1) {
        let bv = dev.verts[dv].0;
        for &(be, bend) in base.edges_at(bv) {
            dev.lift_edge(dv, be, bend)?;
        }
    }

    intern_dev(dev, base, radius)
}

fn intern_dev(dev: Dev, base: &SquareComplex, radius: usize) -> Result<DevelopedBall> {
    let vname = |i: usize| format!("v{i:05}");
    let ename = |i: usize| format!("e{i:05}");
    let sname = |i: usize| format!("s{i:05}");
    let mut b = ComplexBuilder::new();
    for i in 0..dev.verts.len() {
        b.vertex(&vname(i));
    }
    for (i, (_, ends)) in dev.edges.iter().enumerate() {
        b.edge(&ename(i), &vname(ends[0]), &vname(ends[1]));
    }
    for (i, (_, corners, sides)) in dev.squares.iter().enumerate() {
        let cn: Vec<String> = corners.iter().map(|&v| vname(v)).collect();
        let sn: Vec<String> = sides.iter().map(|&e| ename(e)).collect();
        b.square(
            &sname(i),
            [&cn[0], &cn[1], &cn[2], &cn[3]],
            [&sn[0], &sn[1], &sn[2], &sn[3]],
        );
    }
    let ball = SquareComplex::from_raw(&b.raw()).map_err(|e| {
        Error::DevelopmentFailed(format!("developed ball fails validation: {e}"))
    })?;

    // Dense zero-padded names sort in creation order, so index i is cell i.
    let covering = CellularMap {
        v: (0..dev.verts.len())
            .map(|i| (VertexId(i as u32), dev.verts[i].0))
            .collect(),
        e: (0..dev.edges.len())
            .map(|i| (EdgeId(i as u32), dev.edges[i].0))
            .collect(),
        s: (0..dev.squares.len())
            .map(|i| (SquareId(i as u32), (dev.squares[i].0, D4::IDENTITY)))
            .collect(),
    };
    let depth: Vec<usize> = dev.verts.iter().map(|&(_, d)| d).collect();

    let out = DevelopedBall {
        ball,
        base: base.clone(),
        center: VertexId(0),
        radius,
        covering,
        depth,
        whole: false,
    };
    post_validate(&out)?;
    Ok(out)
}

/// The paranoia pass: everything the development claims, re-checked against
/// the finished ball.
fn post_validate(b: &DevelopedBall) -> Result<()> {
    let fail = |msg: String| Err(Error::DevelopmentFailed(msg));

    if b.ball.euler() != 1 {
        return fail(format!("ball is not disk-like: Euler characteristic {}", b.ball.euler()));
    }

    // Recorded depths must be true hop distances.
    let mut dist = vec![usize::MAX; b.ball.n_vertices()];
    dist[b.center.index()] = 0;
    let mut queue = VecDeque::from([b.center]);
    while let Some(v) = queue.pop_front() {
        for &(e, _) in b.ball.edges_at(v) {
            let u = b.ball.edge_end(e, b.ball.end_at(e, v).flip());
            if dist[u.index()] == usize::MAX {
                dist[u.index()] = dist[v.index()] + 1;
                queue.push_back(u);
            }
        }
    }
    for v in b.ball.vertices() {
        if dist[v.index()] != b.depth(v) {
            return fail(format!(
                "depth bookkeeping wrong at {v:?}: recorded {}, actual {:?}",
                b.depth(v),
                dist[v.index()]
            ));
        }
    }
    if b.max_depth() > b.radius {
        return fail("ball contains vertices beyond the requested radius".into());
    }

    verify_map(&b.ball, &b.base, &b.covering)
        .map_err(|e| Error::DevelopmentFailed(format!("covering map broken: {e}")))?;

    // Every cell hangs off the layer that created it: edges reach back to
    // depth ≤ R−1, squares to depth ≤ R−2. Together with the star checks
    // below this pins the ball, so a stored ball that passes is the ball.
    if !b.whole {
        for e in b.ball.edge_ids() {
            let [x, y] = b.ball.edge_ends(e);
            if b.depth(x).min(b.depth(y)) + 1 > b.radius {
                return fail(format!("{e:?} lies entirely beyond the last germ layer"));
            }
        }
        for s in b.ball.square_ids() {
            let m = b.ball.square(s).corners.iter().map(|&v| b.depth(v)).min();
            if m.unwrap() + 2 > b.radius {
                return fail(format!("{s:?} lies entirely beyond the last complete layer"));
            }
        }
    }

    // Below the rim the covering restricts to a bijection on edge germs.
    for v in b.ball.vertices() {
        if !b.whole && b.depth(v) + 1 > b.radius {
            continue;
        }
        let bv = b.covering.vertex(v).expect("total covering");
        let mut seen = BTreeSet::new();
        for &(e, end) in b.ball.edges_at(v) {
            let Some((be, flipped)) = b.covering.edge_with_flip(&b.ball, &b.base, e) else {
                return fail(format!("an edge at {v:?} is missing from the covering"));
            };
            let bend = if flipped { end.flip() } else { end };
            if !seen.insert((be, bend)) {
                return fail(format!("two edges at {v:?} cover the same base germ"));
            }
        }
        if seen.len() != b.base.edges_at(bv).len() {
            return fail(format!("{v:?} is missing lifts of base germs"));
        }
    }

    // At complete vertices the covering restricts to a link isomorphism.
    for v in b.ball.vertices() {
        if !b.complete_vertex(v) {
            continue;
        }
        let bv = b.covering.vertex(v).expect("total covering");
        if !links_agree(&b.ball, v, &b.base, bv, &b.covering) {
            return fail(format!("link at {v:?} does not match its base link"));
        }
    }
    Ok(())
}

/// Rebuilds a ball from stored parts, re-deriving depths from scratch and
/// re-running every development invariant. The stored radius is verified,
/// not trusted: overstating it breaks the germ layer, understating it
/// breaks the depth bound.
pub(crate) fn assemble_ball(
    ball: SquareComplex,
    base: SquareComplex,
    center: VertexId,
    radius: usize,
    covering: CellularMap,
    whole: bool,
) -> Result<DevelopedBall> {
    if let Err(w) = check_npc(&base) {
        return Err(Error::Curvature {
            vertex: w.vertex,
            cycle_len: w.cycle.len(),
        });
    }
    if covering.v.len() != ball.n_vertices()
        || covering.e.len() != ball.n_edges()
        || covering.s.len() != ball.n_squares()
    {
        return Err(Error::Domain(
            "covering map must be defined on every ball cell".into(),
        ));
    }

    let mut depth = vec![usize::MAX; ball.n_vertices()];
    depth[center.index()] = 0;
    let mut queue = VecDeque::from([center]);
    while let Some(v) = queue.pop_front() {
        for &(e, _) in ball.edges_at(v) {
            let u = ball.edge_end(e, ball.end_at(e, v).flip());
            if depth[u.index()] == usize::MAX {
                depth[u.index()] = depth[v.index()] + 1;
                queue.push_back(u);
            }
        }
    }
    if depth.contains(&usize::MAX) {
        return Err(Error::Domain("ball is not connected".into()));
    }

    if whole {
        if !is_isomorphism(&ball, &base, &covering) {
            return Err(Error::Domain(
                "whole-space ball must cover the base isomorphically".into(),
            ));
        }
        if radius != depth.iter().copied().max().unwrap_or(0) {
            return Err(Error::Domain(
                "whole-space ball must record the center's eccentricity as its radius".into(),
            ));
        }
    } else if radius < 1 {
        return Err(Error::Domain("development radius must be at least 1".into()));
    }

    let out = DevelopedBall {
        ball,
        base,
        center,
        radius,
        covering,
        depth,
        whole,
    };
    post_validate(&out)?;
    Ok(out)
}

/// Wraps an already simply connected NPC complex as a ball that is the
/// whole space: every cell is final, no truncation anywhere. Simple
/// connectivity is verified by re-developing the complex past its diameter
/// and comparing cell counts.
pub fn from_simply_connected(x: &SquareComplex, basepoint: VertexId) -> Result<DevelopedBall> {
    if let Err(w) = check_npc(x) {
        return Err(Error::Curvature {
            vertex: w.vertex,
            cycle_len: w.cycle.len(),
        });
    }
    if x.euler() != 1 {
        return Err(Error::Domain(format!(
            "complex is not simply connected (Euler characteristic {})",
            x.euler()
        )));
    }
    let mut dist = vec![usize::MAX; x.n_vertices()];
    dist[basepoint.index()] = 0;
    let mut queue = VecDeque::from([basepoint]);
    while let Some(v) = queue.pop_front() {
        for &(e, _) in x.edges_at(v) {
            let u = x.edge_end(e, x.end_at(e, v).flip());
            if dist[u.index()] == usize::MAX {
                dist[u.index()] = dist[v.index()] + 1;
                queue.push_back(u);
            }
        }
    }
    if dist.contains(&usize::MAX) {
        return Err(Error::Domain("complex is not connected".into()));
    }
    let ecc = dist.iter().copied().max().unwrap_or(0);
    let probe = develop(x, basepoint, ecc + 2)?;
    if probe.ball().n_vertices() != x.n_vertices()
        || probe.ball().n_edges() != x.n_edges()
        || probe.ball().n_squares() != x.n_squares()
    {
        return Err(Error::Domain(
            "complex is not simply connected (cover is strictly larger)".into(),
        ));
    }
    Ok(DevelopedBall {
        ball: x.clone(),
        base: x.clone(),
        center: basepoint,
        radius: ecc,
        covering: identity_map(x),
        depth: dist,
        whole: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{compose, grow_deck_map, grow_equivariant_map};
    use crate::corpus;

    /// Independent count oracle: the diamond |x|+|y| ≤ R in the standard
    /// square grid on ℤ².
    fn z2_diamond_counts(r: i64) -> (usize, usize, usize) {
        let mut v = 0usize;
        let mut e = 0usize;
        let mut s = 0usize;
        let d = |x: i64, y: i64| x.abs() + y.abs();
        for x in -r..=r {
            for y in -r..=r {
                if d(x, y) <= r {
                    v += 1;
                }
                if d(x, y) <= r && d(x + 1, y) <= r {
                    e += 1;
                }
                if d(x, y) <= r && d(x, y + 1) <= r {
                    e += 1;
                }
                if [d(x, y), d(x + 1, y), d(x, y + 1), d(x + 1, y + 1)]
                    .iter()
                    .all(|&t| t <= r)
                {
                    s += 1;
                }
            }
        }
        (v, e, s)
    }

    #[test]
    fn torus_development_matches_grid_diamonds() {
        let base = corpus::torus3x3();
        let c = base.vertex_by_name("v00x00").unwrap();
        let expect_v = [5, 13, 25, 41, 61, 85];
        for r in 1..=6usize {
            let ball = develop(&base, c, r).unwrap();
            let (v, e, s) = z2_diamond_counts(r as i64);
            assert_eq!(ball.ball().n_vertices(), v, "r={r}");
            assert_eq!(ball.ball().n_edges(), e, "r={r}");
            assert_eq!(ball.ball().n_squares(), s, "r={r}");
            assert_eq!(v, expect_v[r - 1]);
            assert_eq!(ball.max_depth(), r);
        }
    }

    #[test]
    fn develop_rejects_positive_curvature() {
        let x = corpus::cube_corner();
        let o = x.vertex_by_name("o").unwrap();
        match develop(&x, o, 2) {
            Err(Error::Curvature { cycle_len: 3, .. }) => {}
            other => panic!("expected curvature error, got {other:?}"),
        }
    }

    #[test]
    fn develop_of_simply_connected_complex_reproduces_it() {
        let x = corpus::square1();
        let v = x.vertex_by_name("v00x00").unwrap();
        let ball = develop(&x, v, 3).unwrap();
        assert_eq!(ball.ball().n_vertices(), 4);
        assert_eq!(ball.ball().n_edges(), 4);
        assert_eq!(ball.ball().n_squares(), 1);

        let whole = from_simply_connected(&x, v).unwrap();
        assert!(whole.is_whole());
        assert!(whole.complete_vertex(v));
    }

    #[test]
    fn from_simply_connected_rejects_the_torus() {
        let x = corpus::torus3x3();
        let v = VertexId(0);
        assert!(from_simply_connected(&x, v).is_err());
    }

    #[test]
    fn wedge_ball_has_eight_squares_in_two_fans() {
        let x = corpus::wedge_tori();
        let w = x.vertex_by_name(corpus::WEDGE_POINT).unwrap();
        let ball = develop(&x, w, 2).unwrap();
        assert_eq!(ball.ball().n_squares(), 8);
        assert_eq!(ball.ball().n_vertices(), 25);
        assert_eq!(ball.ball().n_edges(), 32);
        assert_eq!(ball.ball().corners_at(ball.center()).len(), 8);
        let l = crate::links::link(ball.ball(), ball.center());
        let report = l.simple_cycles(4);
        assert_eq!(report.cycles.len(), 2, "two disjoint 4-cycles");
        assert_eq!(report.girth, Some(4));
    }

    #[test]
    fn fake_disk_covers_itself() {
        let x = corpus::fake_disk(2);
        let cone = x.vertex_by_name(corpus::FAKE_DISK_CONE).unwrap();
        let ball = develop(&x, cone, 5).unwrap();
        assert_eq!(ball.ball().n_vertices(), x.n_vertices());
        assert_eq!(ball.ball().n_squares(), x.n_squares());
    }

    #[test]
    fn balls_embed_in_bigger_balls_commuting_with_coverings() {
        let base = corpus::torus3x3();
        let c = base.vertex_by_name("v01x02").unwrap();
        for r in 1..=4usize {
            let small = develop(&base, c, r).unwrap();
            let big = develop(&base, c, r + 1).unwrap();
            let f = grow_equivariant_map(
                small.ball(),
                big.ball(),
                &base,
                small.covering(),
                big.covering(),
                small.center(),
                big.center(),
            )
            .unwrap();
            // total on the small ball
            assert_eq!(f.v.len(), small.ball().n_vertices());
            assert_eq!(f.e.len(), small.ball().n_edges());
            assert_eq!(f.s.len(), small.ball().n_squares());
            // injective on vertices
            let images: std::collections::BTreeSet<_> = f.v.values().collect();
            assert_eq!(images.len(), f.v.len());
            // commutes with the coverings
            for (v, tv) in &f.v {
                assert_eq!(small.covering().vertex(*v), big.covering().vertex(*tv));
            }
            for (s, (ts, sym)) in &f.s {
                assert_eq!(
                    small.covering().square(*s).map(|(b, _)| b),
                    big.covering().square(*ts).map(|(b, _)| b)
                );
                assert_eq!(*sym, D4::IDENTITY);
            }
        }
    }

    #[test]
    fn deck_translations_compose() {
        // Deck transformations of the 3x3-torus cover translate by
        // multiples of 3. Walk out to (3,0), (0,3) and (3,3), grow the
        // three deck maps, and check t03 after t30 agrees with t33.
        let base = corpus::torus3x3();
        let c = base.vertex_by_name("v00x00").unwrap();
        let ball = develop(&base, c, 8).unwrap();
        let x = ball.ball();

        // follow the lift of a named base edge out of its 0-end
        let step = |u: VertexId, base_edge: &str| -> VertexId {
            let be = base.edge_by_name(base_edge).unwrap();
            let (e, _) = x
                .edges_at(u)
                .iter()
                .copied()
                .find(|&(e, end)| ball.covering().edge(e) == Some(be) && end == End::Zero)
                .unwrap();
            x.edge_end(e, End::One)
        };
        let walk = |mut u: VertexId, edges: &[&str]| -> VertexId {
            for name in edges {
                u = step(u, name);
            }
            u
        };
        let center = ball.center();
        let east3 = walk(center, &["h00x00", "h01x00", "h02x00"]);
        let north3 = walk(center, &["u00x00", "u00x01", "u00x02"]);
        let diag3 = walk(east3, &["u00x00", "u00x01", "u00x02"]);
        assert_eq!(ball.covering().vertex(east3), Some(c), "a full loop of the base");

        let t30 = grow_deck_map(x, &base, ball.covering(), center, east3).unwrap();
        let t03 = grow_deck_map(x, &base, ball.covering(), center, north3).unwrap();
        let t33 = grow_deck_map(x, &base, ball.covering(), center, diag3).unwrap();
        let composed = compose(&t03, &t30);

        for v in x.vertices() {
            if ball.depth(v) <= 2 {
                assert_eq!(composed.vertex(v), t33.vertex(v), "{v:?}");
                assert!(composed.vertex(v).is_some());
            }
        }
        for e in x.edge_ids() {
            let [a, b] = x.edge_ends(e);
            if ball.depth(a).max(ball.depth(b)) <= 2 {
                assert_eq!(composed.edge(e), t33.edge(e));
                assert!(composed.edge(e).is_some());
            }
        }
        for s in x.square_ids() {
            let chain = x.square(s);
            if chain.corners.iter().all(|&v| ball.depth(v) <= 2) {
                assert_eq!(composed.square(s), t33.square(s));
                assert!(composed.square(s).is_some());
            }
        }
    }
}
