//! Detection of flat disks, quarter-plane disks, and fake disks around a
//! vertex of a developed ball, plus direction classification in flats.
//!
//! A pattern of radius m is a subcomplex isomorphic to n quarter grids
//! [0,m]² glued cyclically along their boundary rays at a common cone
//! vertex, with disjoint interiors: n = 4 is a flat disk, n = 5 a fake
//! disk, and n = 1 (no gluing) a quarter disk.
//!
//! The search anchors on a simple n-cycle in the cone link (a single
//! corner for quarter disks) and grows the sheets column by column. Each
//! new square is forced by two known boundary edges, so the only choice
//! points are ray continuations at branching vertices, handled by
//! backtracking. The sheet-to-sheet gluing is seeded, not re-chosen: sheet
//! q's x-ray is sheet q−1's y-ray verbatim.
//!
//! Whenever the growth would read the link of a vertex the ball may have
//! truncated, the attempt is inconclusive rather than negative: the caller
//! gets a "ball too small" error whose payload is the largest radius that
//! was still conclusive.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::complex::SquareComplex;
use crate::cover::DevelopedBall;
use crate::error::{Error, Result};
use crate::ids::{EdgeId, End, SquareId, VertexId};
use crate::links::{link, LinkGraph};
use crate::rational::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SectorKind {
    FlatDisk,
    QuarterDisk,
    FakeDisk,
}

impl SectorKind {
    pub fn sheets(self) -> usize {
        match self {
            SectorKind::FlatDisk => 4,
            SectorKind::QuarterDisk => 1,
            SectorKind::FakeDisk => 5,
        }
    }

    fn cyclic(self) -> bool {
        self != SectorKind::QuarterDisk
    }

    pub fn name(self) -> &'static str {
        match self {
            SectorKind::FlatDisk => "flat-disk",
            SectorKind::QuarterDisk => "quarter-disk",
            SectorKind::FakeDisk => "fake-disk",
        }
    }

    pub fn from_name(name: &str) -> Option<SectorKind> {
        match name {
            "flat-disk" => Some(SectorKind::FlatDisk),
            "quarter-disk" => Some(SectorKind::QuarterDisk),
            "fake-disk" => Some(SectorKind::FakeDisk),
            _ => None,
        }
    }
}

/// One quarter-grid sheet: vertex (x, y) for x, y ∈ [0, m] and square
/// (x, y) for x, y ∈ [0, m), both in x-major order. Vertex (0, 0) is the
/// cone; the x-axis is the gluing ray shared with the previous sheet.
#[derive(Clone, Debug)]
pub struct Chart {
    pub vertices: Vec<VertexId>,
    pub squares: Vec<SquareId>,
}

#[derive(Clone, Debug)]
pub struct SectorPattern {
    pub kind: SectorKind,
    pub cone: VertexId,
    pub radius: usize,
    pub sheets: Vec<Chart>,
}

impl SectorPattern {
    pub fn vertex(&self, sheet: usize, x: usize, y: usize) -> VertexId {
        self.sheets[sheet].vertices[x * (self.radius + 1) + y]
    }

    pub fn square(&self, sheet: usize, x: usize, y: usize) -> SquareId {
        self.sheets[sheet].squares[x * self.radius + y]
    }

    pub fn distinct_squares(&self) -> usize {
        self.sheets
            .iter()
            .flat_map(|c| c.squares.iter())
            .collect::<BTreeSet<_>>()
            .len()
    }

    pub fn distinct_vertices(&self) -> usize {
        self.sheets
            .iter()
            .flat_map(|c| c.vertices.iter())
            .collect::<BTreeSet<_>>()
            .len()
    }
}

/// Scratch sheet during growth; every slot is optional until forced.
#[derive(Clone)]
struct Grid {
    m: usize,
    v: Vec<Option<VertexId>>,
    ex: Vec<Option<EdgeId>>,
    ey: Vec<Option<EdgeId>>,
    s: Vec<Option<SquareId>>,
}

impl Grid {
    fn new(m: usize) -> Grid {
        Grid {
            m,
            v: vec![None; (m + 1) * (m + 1)],
            ex: vec![None; m * (m + 1)],
            ey: vec![None; (m + 1) * m],
            s: vec![None; m * m],
        }
    }

    fn v(&self, x: usize, y: usize) -> Option<VertexId> {
        self.v[x * (self.m + 1) + y]
    }

    /// Edge from (x, y) to (x+1, y).
    fn ex(&self, x: usize, y: usize) -> Option<EdgeId> {
        self.ex[x * (self.m + 1) + y]
    }

    /// Edge from (x, y) to (x, y+1).
    fn ey(&self, x: usize, y: usize) -> Option<EdgeId> {
        self.ey[x * self.m + y]
    }

    fn set_v(&mut self, x: usize, y: usize, val: VertexId) -> bool {
        check_set(&mut self.v[x * (self.m + 1) + y], val)
    }

    fn set_ex(&mut self, x: usize, y: usize, val: EdgeId) -> bool {
        check_set(&mut self.ex[x * (self.m + 1) + y], val)
    }

    fn set_ey(&mut self, x: usize, y: usize, val: EdgeId) -> bool {
        check_set(&mut self.ey[x * self.m + y], val)
    }

    fn set_s(&mut self, x: usize, y: usize, val: SquareId) -> bool {
        check_set(&mut self.s[x * self.m + y], val)
    }
}

fn check_set<T: Copy + PartialEq>(slot: &mut Option<T>, val: T) -> bool {
    match *slot {
        None => {
            *slot = Some(val);
            true
        }
        Some(old) => old == val,
    }
}

enum Attempt {
    Found(SectorPattern),
    NotFound,
    Blocked,
}

struct Search<'a> {
    ball: &'a DevelopedBall,
    x: &'a SquareComplex,
    cone: VertexId,
    m: usize,
    kind: SectorKind,
    /// Ray germ edges at the cone, in cyclic order; sheet q runs from ray
    /// q (its x-axis) to ray q+1 (its y-axis).
    rays: Vec<EdgeId>,
    blocked: bool,
}

impl<'a> Search<'a> {
    fn far(&self, e: EdgeId, v: VertexId) -> VertexId {
        self.x.edge_end(e, self.x.end_at(e, v).flip())
    }

    /// Link of `u`, or None (and the blocked flag) when the ball may have
    /// truncated it.
    fn trusted_link(&mut self, u: VertexId) -> Option<LinkGraph> {
        if self.ball.complete_vertex(u) {
            Some(link(self.x, u))
        } else {
            self.blocked = true;
            None
        }
    }

    fn run(&mut self) -> Option<SectorPattern> {
        let grids = vec![Grid::new(self.m); self.kind.sheets()];
        let grids = self.solve(grids, 0, 0)?;
        self.finish(grids)
    }

    fn seed_sheet(&self, g: &mut Vec<Grid>, q: usize) -> bool {
        let n = self.kind.sheets();
        let m = self.m;
        if !g[q].set_v(0, 0, self.cone) {
            return false;
        }
        if q == 0 || !self.kind.cyclic() {
            if !g[q].set_ex(0, 0, self.rays[0]) {
                return false;
            }
        } else {
            // x-ray = previous sheet's y-ray, verbatim
            for t in 0..m {
                let e = g[q - 1].ey(0, t).expect("previous sheet filled");
                let v = g[q - 1].v(0, t + 1).expect("previous sheet filled");
                if !g[q].set_ex(t, 0, e) || !g[q].set_v(t + 1, 0, v) {
                    return false;
                }
            }
        }
        if !g[q].set_ey(0, 0, self.rays[(q + 1) % self.rays.len()]) {
            return false;
        }
        if self.kind.cyclic() && q == n - 1 {
            // y-ray closes back onto sheet 0's x-ray
            for t in 0..m {
                let e = g[0].ex(t, 0).expect("sheet 0 filled");
                let v = g[0].v(t + 1, 0).expect("sheet 0 filled");
                if !g[q].set_ey(0, t, e) || !g[q].set_v(0, t + 1, v) {
                    return false;
                }
            }
        }
        true
    }

    fn solve(&mut self, mut g: Vec<Grid>, sheet: usize, cell: usize) -> Option<Vec<Grid>> {
        let m = self.m;
        if sheet == self.kind.sheets() {
            return Some(g);
        }
        if cell == 0 && !self.seed_sheet(&mut g, sheet) {
            return None;
        }
        if cell == m * m {
            return self.solve(g, sheet + 1, 0);
        }
        let (x, y) = (cell / m, cell % m);

        // Ray continuation choices. The new germ must bound a square with
        // the known inward germ and differ from the germ we came along.
        if y == 0 && x >= 1 && g[sheet].ex(x, 0).is_none() {
            let u = g[sheet].v(x, 0).expect("set by previous cell");
            let l = self.trusted_link(u)?;
            let be = g[sheet].ex(x - 1, 0).unwrap();
            let ie = g[sheet].ey(x, 0).unwrap();
            let back = l.node_of(be, self.x.end_at(be, u))?;
            let inward = l.node_of(ie, self.x.end_at(ie, u))?;
            for &(_, cand) in l.neighbors(inward) {
                if cand == back {
                    continue;
                }
                let (e, _) = l.node(cand);
                let mut g2 = g.clone();
                if g2[sheet].set_ex(x, 0, e) && g2[sheet].set_v(x + 1, 0, self.far(e, u)) {
                    if let Some(done) = self.solve(g2, sheet, cell) {
                        return Some(done);
                    }
                }
            }
            return None;
        }
        if x == 0 && y >= 1 && g[sheet].ey(0, y).is_none() {
            let u = g[sheet].v(0, y).expect("set by previous cell");
            let l = self.trusted_link(u)?;
            let be = g[sheet].ey(0, y - 1).unwrap();
            let ie = g[sheet].ex(0, y).unwrap();
            let back = l.node_of(be, self.x.end_at(be, u))?;
            let inward = l.node_of(ie, self.x.end_at(ie, u))?;
            for &(_, cand) in l.neighbors(inward) {
                if cand == back {
                    continue;
                }
                let (e, _) = l.node(cand);
                let mut g2 = g.clone();
                if g2[sheet].set_ey(0, y, e) && g2[sheet].set_v(0, y + 1, self.far(e, u)) {
                    if let Some(done) = self.solve(g2, sheet, cell) {
                        return Some(done);
                    }
                }
            }
            return None;
        }

        // Deterministic cell: the square is forced by its two known edges.
        let u = g[sheet].v(x, y).expect("filled before this cell");
        let e1 = g[sheet].ex(x, y).expect("filled before this cell");
        let e2 = g[sheet].ey(x, y).expect("filled before this cell");
        if !self.ball.complete_vertex(u) {
            self.blocked = true;
            return None;
        }
        let (s, k) = self.x.corner_by_edges(u, e1, e2)?;
        let side = |i: u8| self.x.side_edge(s, (k + i) % 4);
        let fx = self.far(e1, u);
        let fy = self.far(e2, u);
        let diag = self.x.corner_vertex(s, (k + 2) % 4);
        let (ey_next, ex_next) = if side(0) == e1 {
            (side(1), side(2))
        } else {
            debug_assert_eq!(side(0), e2);
            (side(2), side(1))
        };
        let gq = &mut g[sheet];
        let ok = gq.set_s(x, y, s)
            && gq.set_v(x + 1, y, fx)
            && gq.set_v(x, y + 1, fy)
            && gq.set_v(x + 1, y + 1, diag)
            && gq.set_ey(x + 1, y, ey_next)
            && gq.set_ex(x, y + 1, ex_next);
        if !ok {
            return None;
        }
        self.solve(g, sheet, cell + 1)
    }

    /// Count the collected cells against the model: equality certifies the
    /// chart maps are jointly injective away from the gluing rays.
    fn finish(&self, g: Vec<Grid>) -> Option<SectorPattern> {
        let n = self.kind.sheets();
        let m = self.m;
        let verts: BTreeSet<VertexId> = g.iter().flat_map(|q| q.v.iter().map(|s| s.unwrap())).collect();
        let edges: BTreeSet<EdgeId> = g
            .iter()
            .flat_map(|q| q.ex.iter().chain(q.ey.iter()).map(|s| s.unwrap()))
            .collect();
        let squares: BTreeSet<SquareId> =
            g.iter().flat_map(|q| q.s.iter().map(|s| s.unwrap())).collect();
        let (want_v, want_e) = if self.kind.cyclic() {
            (n * m * m + n * m + 1, 2 * n * m * m + n * m)
        } else {
            ((m + 1) * (m + 1), 2 * m * (m + 1))
        };
        if verts.len() != want_v || edges.len() != want_e || squares.len() != n * m * m {
            return None;
        }
        Some(SectorPattern {
            kind: self.kind,
            cone: self.cone,
            radius: m,
            sheets: g
                .into_iter()
                .map(|q| Chart {
                    vertices: q.v.into_iter().map(|s| s.unwrap()).collect(),
                    squares: q.s.into_iter().map(|s| s.unwrap()).collect(),
                })
                .collect(),
        })
    }
}

fn attempt(ball: &DevelopedBall, v: VertexId, m: usize, kind: SectorKind) -> Attempt {
    let x = ball.ball();
    let l = link(x, v);
    let node_edge = |i: usize| l.node(i).0;
    let anchors: Vec<Vec<EdgeId>> = if kind == SectorKind::QuarterDisk {
        l.corners()
            .iter()
            .map(|c| vec![node_edge(c.a), node_edge(c.b)])
            .collect()
    } else {
        let n = kind.sheets();
        let report = l.simple_cycles(n);
        report
            .cycles_of_len(n)
            .map(|cyc| cyc.iter().map(|&i| node_edge(i)).collect())
            .collect()
    };
    let mut blocked_any = false;
    for rays in anchors {
        let mut search = Search {
            ball,
            x,
            cone: v,
            m,
            kind,
            rays,
            blocked: false,
        };
        if let Some(pattern) = search.run() {
            return Attempt::Found(pattern);
        }
        blocked_any |= search.blocked;
    }
    if blocked_any {
        Attempt::Blocked
    } else {
        Attempt::NotFound
    }
}

/// Searches for a radius-`radius` sector pattern of the given kind coned
/// at `v`. `Ok(None)` means the ball rules the pattern out; a "ball too
/// small" error means the ball was too truncated to decide, with the
/// largest conclusively achieved radius in the payload.
pub fn detect_sector(
    ball: &DevelopedBall,
    v: VertexId,
    radius: usize,
    kind: SectorKind,
) -> Result<Option<SectorPattern>> {
    if radius < 1 {
        return Err(Error::Domain("sector radius must be at least 1".into()));
    }
    if !ball.complete_vertex(v) {
        return Err(Error::BallTooSmall {
            achieved: 0,
            needed: radius,
        });
    }
    // Patterns are nested in the radius, so walk up: a definite miss at a
    // smaller radius rules out the larger one, and a truncated attempt
    // reports how far the evidence actually reaches.
    let mut best = None;
    for m in 1..=radius {
        match attempt(ball, v, m, kind) {
            Attempt::Found(p) => best = Some(p),
            Attempt::NotFound => return Ok(None),
            Attempt::Blocked => {
                return Err(Error::BallTooSmall {
                    achieved: m - 1,
                    needed: radius,
                })
            }
        }
    }
    Ok(best)
}

/// Runs `detect_sector` at every vertex, in parallel, merged in vertex-id
/// order.
pub fn scan_sectors(
    ball: &DevelopedBall,
    radius: usize,
    kind: SectorKind,
) -> Vec<(VertexId, Result<Option<SectorPattern>>)> {
    ball.ball()
        .vertices()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|v| (v, detect_sector(ball, v, radius, kind)))
        .collect()
}

/// A direction in a flat disk, in the chart of the quadrant it points
/// into. Singular directions are the edge-parallel ones: exactly those
/// admitting a flat half-strip along an axis of the grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectionClass {
    /// Quadrant sheet of the pattern the direction points into.
    pub sheet: usize,
    /// The direction in that sheet's coordinates; both components ≥ 0.
    pub dir: (Q, Q),
    pub singular: bool,
}

/// Classifies a direction, given in the coordinates of sheet 0 of a flat
/// disk, as singular (edge-parallel) or regular.
pub fn classify_direction(pattern: &SectorPattern, dir: (Q, Q)) -> Result<DirectionClass> {
    use num::{Signed, Zero};
    if pattern.kind != SectorKind::FlatDisk {
        return Err(Error::Domain("direction classification needs a flat disk".into()));
    }
    if pattern.radius < 2 {
        return Err(Error::BallTooSmall {
            achieved: pattern.radius,
            needed: 2,
        });
    }
    if dir.0.is_zero() && dir.1.is_zero() {
        return Err(Error::Domain("cannot classify the zero direction".into()));
    }
    let mut local = dir;
    for sheet in 0..4 {
        if !local.0.is_negative() && !local.1.is_negative() {
            let singular = local.0.is_zero() || local.1.is_zero();
            return Ok(DirectionClass {
                sheet,
                dir: local,
                singular,
            });
        }
        // rotate by a quarter turn into the next sheet's frame
        local = (local.1.clone(), -local.0);
    }
    unreachable!("every nonzero vector lands in one of four quadrants")
}

#[derive(Clone, Debug)]
pub struct SpacingReport {
    /// The four axis germs at the cone, in cyclic order.
    pub germs: Vec<(EdgeId, End)>,
    /// Angle of each axis from the first, in π/2 units: 0, 1, 2, 3.
    pub angles_halfpi: Vec<usize>,
    pub evenly_spaced: bool,
}

/// Verifies that the four singular directions of a flat disk sit at
/// pairwise angle multiples of π/2, evenly spaced around the cone.
pub fn singular_spacing_check(x: &SquareComplex, pattern: &SectorPattern) -> Result<SpacingReport> {
    if pattern.kind != SectorKind::FlatDisk {
        return Err(Error::Domain("spacing check needs a flat disk".into()));
    }
    if pattern.radius < 2 {
        return Err(Error::BallTooSmall {
            achieved: pattern.radius,
            needed: 2,
        });
    }
    let cone = pattern.cone;
    let l = link(x, cone);
    let mut nodes = Vec::new();
    let mut germs = Vec::new();
    for q in 0..4 {
        let first = pattern.vertex(q, 1, 0);
        let (e, end) = x
            .edges_at(cone)
            .iter()
            .copied()
            .find(|&(e, end)| x.edge_end(e, end.flip()) == first)
            .ok_or_else(|| Error::Domain("pattern axis edge missing".into()))?;
        nodes.push(
            l.node_of(e, end)
                .ok_or_else(|| Error::Domain("pattern axis germ missing from link".into()))?,
        );
        germs.push((e, end));
    }
    // Angles within the flat: walk the anchor 4-cycle. Consecutive axes
    // must share a pattern square; that puts axis q at q·(π/2).
    let mut evenly_spaced = true;
    for q in 0..4 {
        let corner = l.corner_between(nodes[q], nodes[(q + 1) % 4]);
        let wanted = pattern.square(q, 0, 0);
        evenly_spaced &= corner.map(|c| l.corner(c).square) == Some(wanted);
    }
    Ok(SpacingReport {
        germs,
        angles_halfpi: vec![0, 1, 2, 3],
        evenly_spaced,
    })
}
