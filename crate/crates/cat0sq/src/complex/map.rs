//! Cellular maps between square complexes.
//!
//! A map stores correspondences on cell ids only; the square correspondence
//! carries a [`D4`] symmetry saying how corners align. Maps may be partial
//! (defined on a subcomplex), which is what covering maps restricted to
//! balls and finite shadows of translations need.

use std::collections::BTreeMap;
use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::ids::{EdgeId, End, SquareId, VertexId};
use crate::rational::Q;

use super::SquareComplex;

/// A symmetry of the unit square, acting on corner indices 0..4.
/// `apply(k) = rot + k` without flip, `rot − k` with flip (mod 4).
/// As a point map of [0,1]² this is "transpose if flip, then rotate
/// `rot` quarter turns", where one quarter turn is (x,y) ↦ (1−y, x).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct D4 {
    pub rot: u8,
    pub flip: bool,
}

impl D4 {
    pub const IDENTITY: D4 = D4 {
        rot: 0,
        flip: false,
    };

    pub fn new(rot: u8, flip: bool) -> D4 {
        D4 { rot: rot % 4, flip }
    }

    /// All eight symmetries, identity first.
    pub fn all() -> [D4; 8] {
        std::array::from_fn(|i| D4::new((i % 4) as u8, i >= 4))
    }

    /// Image of corner index `k`.
    #[inline]
    pub fn apply(self, k: u8) -> u8 {
        if self.flip {
            (self.rot + 4 - (k % 4)) % 4
        } else {
            (self.rot + k) % 4
        }
    }

    /// Image of side index `k` (the side between corners `k` and `k+1`).
    /// Sides map to sides: without flip side k ↦ side rot+k; with flip the
    /// image connects corners `rot−k` and `rot−k−1`, i.e. side `rot−k−1`.
    #[inline]
    pub fn apply_side(self, k: u8) -> u8 {
        if self.flip {
            (self.rot + 7 - (k % 4)) % 4
        } else {
            (self.rot + k) % 4
        }
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(self, other: D4) -> D4 {
        let rot = if self.flip {
            (self.rot + 4 - other.rot) % 4
        } else {
            (self.rot + other.rot) % 4
        };
        D4 {
            rot,
            flip: self.flip ^ other.flip,
        }
    }

    pub fn inverse(self) -> D4 {
        if self.flip {
            self
        } else {
            D4 {
                rot: (4 - self.rot) % 4,
                flip: false,
            }
        }
    }

    /// Point action on the unit square with corner k at
    /// (0,0), (1,0), (1,1), (0,1).
    pub fn apply_point(self, x: &Q, y: &Q) -> (Q, Q) {
        let one = Q::from_integer(1.into());
        let (mut px, mut py) = if self.flip {
            (y.clone(), x.clone())
        } else {
            (x.clone(), y.clone())
        };
        for _ in 0..self.rot {
            let nx = &one - &py;
            py = px;
            px = nx;
        }
        (px, py)
    }
}

/// Correspondences of a cellular map. Partial: cells absent from the maps
/// are outside the domain. Source/target complexes are passed alongside.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CellularMap {
    pub v: BTreeMap<VertexId, VertexId>,
    pub e: BTreeMap<EdgeId, EdgeId>,
    pub s: BTreeMap<SquareId, (SquareId, D4)>,
}

impl CellularMap {
    pub fn vertex(&self, v: VertexId) -> Option<VertexId> {
        self.v.get(&v).copied()
    }

    pub fn edge(&self, e: EdgeId) -> Option<EdgeId> {
        self.e.get(&e).copied()
    }

    pub fn square(&self, s: SquareId) -> Option<(SquareId, D4)> {
        self.s.get(&s).copied()
    }

    /// How edge `e` (in `src`) maps onto its image edge: the image edge plus
    /// whether the stored orientations disagree. Needs the endpoint images.
    pub fn edge_with_flip(
        &self,
        src: &SquareComplex,
        dst: &SquareComplex,
        e: EdgeId,
    ) -> Option<(EdgeId, bool)> {
        let te = self.edge(e)?;
        let v0 = self.vertex(src.edge_end(e, End::Zero))?;
        let ends = dst.edge_ends(te);
        if ends[0] == v0 {
            Some((te, false))
        } else if ends[1] == v0 {
            Some((te, true))
        } else {
            None
        }
    }
}

/// Builds the identity map of a complex (total).
pub fn identity_map(x: &SquareComplex) -> CellularMap {
    CellularMap {
        v: x.vertices().map(|v| (v, v)).collect(),
        e: x.edge_ids().map(|e| (e, e)).collect(),
        s: x.square_ids().map(|s| (s, (s, D4::IDENTITY))).collect(),
    }
}

/// Verifies that `f` preserves incidence wherever it is defined:
/// mapped edges carry mapped endpoints onto the image edge's endpoints, and
/// mapped squares align corners and sides according to their symmetry.
/// Squares and edges in the domain must have their boundary in the domain.
pub fn verify_map(src: &SquareComplex, dst: &SquareComplex, f: &CellularMap) -> Result<()> {
    for (&e, &te) in &f.e {
        if e.index() >= src.n_edges() || te.index() >= dst.n_edges() {
            return Err(Error::Domain(format!("edge correspondence {e:?} → {te:?} out of range")));
        }
        let [a, b] = src.edge_ends(e);
        let (ta, tb) = match (f.vertex(a), f.vertex(b)) {
            (Some(x), Some(y)) => (x, y),
            _ => {
                return Err(Error::Domain(format!(
                    "edge {e:?} is mapped but an endpoint is not"
                )))
            }
        };
        let ends = dst.edge_ends(te);
        if !(ends == [ta, tb] || ends == [tb, ta]) {
            return Err(Error::Domain(format!(
                "edge {e:?} endpoints do not land on its image edge {te:?}"
            )));
        }
    }
    for (&s, &(ts, sym)) in &f.s {
        if s.index() >= src.n_squares() || ts.index() >= dst.n_squares() {
            return Err(Error::Domain(format!("square correspondence {s:?} → {ts:?} out of range")));
        }
        for k in 0..4u8 {
            let cv = src.corner_vertex(s, k);
            let want_v = dst.corner_vertex(ts, sym.apply(k));
            if f.vertex(cv) != Some(want_v) {
                return Err(Error::Domain(format!(
                    "square {s:?} corner {k} does not align with image corner {}",
                    sym.apply(k)
                )));
            }
            let ce = src.side_edge(s, k);
            let want_e = dst.side_edge(ts, sym.apply_side(k));
            if f.edge(ce) != Some(want_e) {
                return Err(Error::Domain(format!(
                    "square {s:?} side {k} does not align with image side {}",
                    sym.apply_side(k)
                )));
            }
        }
    }
    Ok(())
}

/// `f ∘ g`: applies `g` first. Cells outside either domain drop out.
pub fn compose(f: &CellularMap, g: &CellularMap) -> CellularMap {
    let mut out = CellularMap::default();
    for (&v, &gv) in &g.v {
        if let Some(fv) = f.vertex(gv) {
            out.v.insert(v, fv);
        }
    }
    for (&e, &ge) in &g.e {
        if let Some(fe) = f.edge(ge) {
            out.e.insert(e, fe);
        }
    }
    for (&s, &(gs, gsym)) in &g.s {
        if let Some((fs, fsym)) = f.square(gs) {
            out.s.insert(s, (fs, fsym.compose(gsym)));
        }
    }
    out
}

/// Whether `f` is a total bijective incidence-preserving correspondence.
pub fn is_isomorphism(src: &SquareComplex, dst: &SquareComplex, f: &CellularMap) -> bool {
    if f.v.len() != src.n_vertices()
        || f.e.len() != src.n_edges()
        || f.s.len() != src.n_squares()
        || dst.n_vertices() != src.n_vertices()
        || dst.n_edges() != src.n_edges()
        || dst.n_squares() != src.n_squares()
    {
        return false;
    }
    let mut seen_v = vec![false; dst.n_vertices()];
    for &tv in f.v.values() {
        if tv.index() >= seen_v.len() || seen_v[tv.index()] {
            return false;
        }
        seen_v[tv.index()] = true;
    }
    let mut seen_e = vec![false; dst.n_edges()];
    for &te in f.e.values() {
        if te.index() >= seen_e.len() || seen_e[te.index()] {
            return false;
        }
        seen_e[te.index()] = true;
    }
    let mut seen_s = vec![false; dst.n_squares()];
    for &(ts, _) in f.s.values() {
        if ts.index() >= seen_s.len() || seen_s[ts.index()] {
            return false;
        }
        seen_s[ts.index()] = true;
    }
    verify_map(src, dst, f).is_ok()
}

/// Whether `f` restricts to an isomorphism from the link of `v` in `src`
/// onto the link of `f(v)` = `bv` in `dst`. Because both links are simple
/// graphs in a valid complex, a bijection on nodes that preserves corners
/// and matches the corner count is enough.
pub fn links_agree(
    src: &SquareComplex,
    v: VertexId,
    dst: &SquareComplex,
    bv: VertexId,
    f: &CellularMap,
) -> bool {
    let lv = crate::links::link(src, v);
    let lb = crate::links::link(dst, bv);
    if lv.n_nodes() != lb.n_nodes() || lv.n_corners() != lb.n_corners() {
        return false;
    }
    let mut image = Vec::with_capacity(lv.n_nodes());
    let mut seen = vec![false; lb.n_nodes()];
    for &(e, end) in lv.nodes() {
        let Some((te, flipped)) = f.edge_with_flip(src, dst, e) else {
            return false;
        };
        let tend = if flipped { end.flip() } else { end };
        let Some(i) = lb.node_of(te, tend) else {
            return false;
        };
        if seen[i] {
            return false;
        }
        seen[i] = true;
        image.push(i);
    }
    lv.corners()
        .iter()
        .all(|c| lb.corner_between(image[c.a], image[c.b]).is_some())
}

/// Inverse of an isomorphism.
pub fn inverse(src: &SquareComplex, dst: &SquareComplex, f: &CellularMap) -> Result<CellularMap> {
    if !is_isomorphism(src, dst, f) {
        return Err(Error::Domain("inverse of a non-isomorphism".into()));
    }
    Ok(CellularMap {
        v: f.v.iter().map(|(&a, &b)| (b, a)).collect(),
        e: f.e.iter().map(|(&a, &b)| (b, a)).collect(),
        s: f.s
            .iter()
            .map(|(&a, &(b, sym))| (b, (a, sym.inverse())))
            .collect(),
    })
}

/// Grows the unique equivariant partial map from `src` to `dst` sending
/// `from` to `to`, where both complexes cover `base` (via `cov_src`,
/// `cov_dst`) and the covering maps are injective on the edge-ends at every
/// vertex (true of developed balls).
///
/// The growth is breadth-first: a matched vertex pair extends across every
/// edge germ whose image germ is present at the partner, and a square is
/// matched once its four sides are. The result is the maximal such map; it
/// errors only if equivariance forces two different images for one cell,
/// which means no such map exists.
pub fn grow_equivariant_map(
    src: &SquareComplex,
    dst: &SquareComplex,
    base: &SquareComplex,
    cov_src: &CellularMap,
    cov_dst: &CellularMap,
    from: VertexId,
    to: VertexId,
) -> Result<CellularMap> {
    if cov_src.vertex(from) != cov_dst.vertex(to) || cov_src.vertex(from).is_none() {
        return Err(Error::Domain(
            "map endpoints have different covering images".into(),
        ));
    }
    let mut f = CellularMap::default();
    f.v.insert(from, to);
    let mut queue = VecDeque::new();
    queue.push_back(from);

    // Germ lookup at a dst vertex: base edge-end → dst edge carrying it.
    let germ_at = |v: VertexId, be: EdgeId, bend: End| -> Option<EdgeId> {
        dst.edges_at(v).iter().copied().find_map(|(e, end)| {
            let (te, tflip) = cov_dst.edge_with_flip(dst, base, e)?;
            let tend = if tflip { end.flip() } else { end };
            (te == be && tend == bend).then_some(e)
        })
    };

    while let Some(v) = queue.pop_front() {
        let w = f.vertex(v).expect("queued vertices are mapped");
        for &(e, end) in src.edges_at(v) {
            let Some((be, bflip)) = cov_src.edge_with_flip(src, base, e) else {
                continue;
            };
            let bend = if bflip { end.flip() } else { end };
            let Some(e2) = germ_at(w, be, bend) else {
                continue;
            };
            match f.e.get(&e) {
                Some(&prev) if prev != e2 => {
                    return Err(Error::Domain(format!(
                        "equivariance forces two images for edge {e:?}"
                    )))
                }
                Some(_) => continue,
                None => {
                    f.e.insert(e, e2);
                }
            }
            let u = src.edge_end(e, end.flip());
            let u2 = dst.edge_end(e2, dst.end_at(e2, w).flip());
            match f.v.get(&u) {
                Some(&prev) if prev != u2 => {
                    return Err(Error::Domain(format!(
                        "equivariance forces two images for vertex {u:?}"
                    )))
                }
                Some(_) => {}
                None => {
                    f.v.insert(u, u2);
                    queue.push_back(u);
                }
            }
        }
    }

    // Squares: mapped once all four sides are. The image square is the one
    // containing the image corner germ; the polygonal axioms make it unique.
    for s in src.square_ids() {
        let sides = src.square(s).sides;
        if !sides.iter().all(|e| f.e.contains_key(e)) {
            continue;
        }
        let v0 = src.corner_vertex(s, 0);
        let w0 = f.vertex(v0).expect("side endpoints are mapped");
        let (in_e, out_e) = src.corner_edges(s, 0);
        let Some((ts, k0)) =
            dst.corner_by_edges(w0, f.edge(in_e).unwrap(), f.edge(out_e).unwrap())
        else {
            continue;
        };
        // Orientation: corner 1 of s must land at k0±1 around ts.
        let w1 = f.vertex(src.corner_vertex(s, 1)).expect("mapped");
        let sym = if dst.corner_vertex(ts, (k0 + 1) % 4) == w1 {
            D4::new(k0, false)
        } else if dst.corner_vertex(ts, (k0 + 3) % 4) == w1 {
            D4::new(k0, true)
        } else {
            return Err(Error::Domain(format!(
                "equivariance gives no consistent corner alignment for square {s:?}"
            )));
        };
        f.s.insert(s, (ts, sym));
    }

    verify_map(src, dst, &f)?;
    Ok(f)
}

/// [`grow_equivariant_map`] from a ball to itself: the finite shadow of a
/// deck transformation, determined by a single vertex pair.
pub fn grow_deck_map(
    x: &SquareComplex,
    base: &SquareComplex,
    cov: &CellularMap,
    from: VertexId,
    to: VertexId,
) -> Result<CellularMap> {
    grow_equivariant_map(x, x, base, cov, cov, from, to)
}
